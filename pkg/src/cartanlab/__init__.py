"""Exact and numerical checks for almost Lie algebras, Cartan-type extensions and Cartan bundles."""
from .algebra import (AlmostLieAlgebra, LinearRep, Subspace, adjoint_rep, bracket, is_derivation_action,
                      is_ideal, is_lie, jacobiator, kernel_of_linear_map, quotient_algebra, semidirect)

__all__ = ["AlmostLieAlgebra", "LinearRep", "Subspace", "adjoint_rep", "bracket", "is_derivation_action",
           "is_ideal", "is_lie", "jacobiator", "kernel_of_linear_map", "quotient_algebra", "semidirect"]
__version__ = "0.1.0"
