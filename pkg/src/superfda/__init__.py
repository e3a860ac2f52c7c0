"""Exact engine for free bigraded-commutative DGAs and super-brane cocycle identities."""

__version__ = "0.1.0"

from .scalars import GaussianRational, ONE, ZERO, I, gq  # noqa: E402
from .graded_algebra import (  # noqa: E402
    Bidegree, GeneratorDecl, GeneratorTable, Element, DerivationSpec, FreeDGA, DgaMorphism,
    declare_algebra, adjoin_generators, apply_derivation, multiply, compose, identity,
    inclusion, pushout, check_morphism, check_d_squared, solve_exactness, homogeneous_basis,
)
