"""Exact computations with n-trivial extension rings ``S = R x_n (M_1, ..., M_n)``
over finite-dimensional algebras over prime fields, and with their modules."""

from .algebra import Module, StructureAlgebra, Verdict, algebras_isomorphic, truncated_polynomial, upper_triangular
from .bimodule import Bimodule, PhiSystem, canonical_system, validate_phi
from .extension import ExtensionRing, InvalidInput, build_extension
from .functors import C, H, K, T, U, Z, check_adjunction
from .homtests import (
    check_selfinj_theorem,
    classify,
    inj_dimension,
    is_flat,
    is_injective,
    is_projective,
    lifting_oracle,
    proj_dimension,
)
from .linalg import PrimeField, Subspace
from .smodule import FModule, GModule, fmodule_to_saction, saction_to_fmodule

__all__ = [
    "Bimodule",
    "C",
    "ExtensionRing",
    "FModule",
    "GModule",
    "H",
    "InvalidInput",
    "K",
    "Module",
    "PhiSystem",
    "PrimeField",
    "StructureAlgebra",
    "Subspace",
    "T",
    "U",
    "Verdict",
    "Z",
    "algebras_isomorphic",
    "build_extension",
    "canonical_system",
    "check_adjunction",
    "check_selfinj_theorem",
    "classify",
    "fmodule_to_saction",
    "inj_dimension",
    "is_flat",
    "is_injective",
    "is_projective",
    "lifting_oracle",
    "proj_dimension",
    "saction_to_fmodule",
    "truncated_polynomial",
    "upper_triangular",
    "validate_phi",
]
