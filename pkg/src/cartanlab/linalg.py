"""Exact linear algebra over the rationals.

Matrices are tuples of row tuples of :class:`fractions.Fraction`. Nothing in
here touches floating point, so rank and membership questions are decided
exactly.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/4"`` to Fraction.

    Floats are refused: they would silently smuggle rounding into exact checks.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def vec(xs: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vec(r) for r in rows)


def zeros(m: int, n: int) -> Matrix:
    return tuple((Fraction(0),) * n for _ in range(m))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def shape(a: Matrix, ncols: int | None = None) -> tuple[int, int]:
    if not a:
        return 0, (ncols or 0)
    return len(a), len(a[0])


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    m, n = shape(a, ncols)
    return tuple(tuple(a[i][j] for i in range(m)) for j in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def matvec(a: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def scale(c, a: Matrix) -> Matrix:
    c = to_fraction(c)
    return tuple(tuple(c * x for x in r) for r in a)


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return sub(matmul(a, b), matmul(b, a))


def vadd(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vscale(c, v: Sequence[Fraction]) -> Vector:
    c = to_fraction(c)
    return tuple(c * x for x in v)


def is_zero(v) -> bool:
    return all(x == 0 for x in v)


def columns(a: Matrix, ncols: int | None = None) -> list[Vector]:
    return list(transpose(a, ncols))


def from_columns(cols: Sequence[Sequence[Fraction]], nrows: int) -> Matrix:
    if not cols:
        return tuple(() for _ in range(nrows))
    return tuple(tuple(c[i] for c in cols) for i in range(nrows))


def rref(a: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are chosen as the first nonzero entry in the column; with exact
    arithmetic there is no reason to pivot by magnitude.
    """
    rows = [list(r) for r in a]
    if not rows:
        return rows, []
    m, n = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def kernel(a: Matrix, ncols: int) -> list[Vector]:
    """Basis of the null space of ``a`` (an m x ncols matrix)."""
    if not a:
        return [unit(ncols, j) for j in range(ncols)]
    rows, pivots = rref(a)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(a: Matrix, b: Sequence[Fraction], ncols: int | None = None) -> Vector | None:
    """One solution of ``a x = b``, or None when inconsistent."""
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))
    aug = tuple(tuple(row) + (to_fraction(bi),) for row, bi in zip(a, b))
    rows, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(rows, pivots):
        x[pc] = row[n]
    return tuple(x)


def independent_subset(vectors: Sequence[Sequence[Fraction]], dim: int) -> list[Vector]:
    """Greedy maximal linearly independent subfamily, order preserved."""
    chosen: list[Vector] = []
    for v in vectors:
        cand = chosen + [tuple(v)]
        if rank(tuple(cand)) == len(cand):
            chosen = cand
    return chosen


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = tuple(tuple(row) + identity(n)[i] for i, row in enumerate(a))
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(r[n:]) for r in rows)


def to_float(a) -> "list":
    """Nested float lists, for handing exact data to numerical code."""
    if isinstance(a, (tuple, list)):
        return [to_float(x) for x in a]
    return float(a)
