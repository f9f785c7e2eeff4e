"""Exact verification toolkit for relational symplectic groupoids and Poisson sigma model boundaries."""

from .groupoid_zoo import cotangent_fiber_groupoid, pair_groupoid, power_analysis, verify_groupoid_axioms
from .poisson_calc import PolyBivector, is_poisson, jacobiator, poisson_bracket
from .relational import (
    build_from_groupoid,
    check_morphism,
    derive_core,
    induced_poisson,
    lagrangian_triple,
    verify_axioms,
    verify_regular,
)
from .symplinalg import (
    CanonicalRelation,
    LinearRelation,
    Subspace,
    SymplecticSpace,
    classify_subspace,
    compose,
    reduce_coisotropic,
    standard_space,
    symplectic_orthogonal,
    transpose,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalRelation", "LinearRelation", "PolyBivector", "Subspace", "SymplecticSpace",
    "build_from_groupoid", "check_morphism", "classify_subspace", "compose",
    "cotangent_fiber_groupoid", "derive_core", "induced_poisson", "is_poisson", "jacobiator",
    "lagrangian_triple", "pair_groupoid", "poisson_bracket", "power_analysis",
    "reduce_coisotropic", "standard_space", "symplectic_orthogonal", "transpose",
    "verify_axioms", "verify_groupoid_axioms", "verify_regular",
]
