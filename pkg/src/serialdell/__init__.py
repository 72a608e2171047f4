"""Homological invariants of finite-dimensional monomial path algebras.

Computes syzygies, projective dimensions, delooping levels and their derived
variants, and the finitistic dimension of serial monomial algebras, through
two independent routes: path combinatorics on the completion graph and exact
linear algebra on quiver representations over a prime field.
"""

from .quiver import (
    BPath,
    InfiniteDimensionalError,
    MonomialAlgebra,
    QuiverError,
    classify_serial,
    enumerate_basis,
    opposite,
    parse_algebra,
    serialize_algebra,
)

__version__ = "0.1.0"

__all__ = [
    "BPath",
    "InfiniteDimensionalError",
    "MonomialAlgebra",
    "QuiverError",
    "classify_serial",
    "enumerate_basis",
    "opposite",
    "parse_algebra",
    "serialize_algebra",
    "__version__",
]
