from fractions import Fraction

import pytest

from cartanlab.algebra import AlmostLieAlgebra, LinearRep, semidirect
from cartanlab.algebras import heisenberg, sp_k1


@pytest.fixture(scope="session")
def hei3():
    return heisenberg(1)


@pytest.fixture(scope="session")
def sp11():
    return sp_k1(1)


@pytest.fixture(scope="session")
def sp11_hei3(sp11, hei3):
    return semidirect(sp11.algebra, sp11.standard_rep, hei3)


def random_algebra(rng, dim, denom=3):
    """Almost Lie algebra with random small rational structure constants."""
    brackets = {(j, k): [Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, denom + 1))) for _ in range(dim)]
                for j in range(dim) for k in range(j + 1, dim)}
    return AlmostLieAlgebra.from_brackets(dim, brackets)


def random_rep(rng, alg, space_dim, denom=3):
    return LinearRep(alg, space_dim, tuple(
        tuple(tuple(Fraction(int(rng.integers(-2, 3)), int(rng.integers(1, denom + 1))) for _ in range(space_dim))
              for _ in range(space_dim)) for _ in range(alg.dim)))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
