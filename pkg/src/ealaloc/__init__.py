"""Exact free-field modules for the extended affine Lie algebra gl_2 over a
quantum torus, with their localizations and twisted localizations."""

from __future__ import annotations

from .action import NotWeightVectorError, WeightValue, act_element, act_generator, apply_E, partial, weight_of
from .algebra import (
    D1,
    D2,
    E11,
    E12,
    E21,
    E22,
    AlgElement,
    Atom,
    MismatchError,
    NilpotencyBoundError,
    ad_e21,
    bracket,
    inv_e21,
    theta_closed,
    theta_series,
    word_mul,
)
from .fock import (
    ModuleSpace,
    Monomial,
    MVector,
    SpaceKind,
    ValidityError,
    ZeroVectorError,
    format_vector,
    homogeneous_components,
    mono_mul,
    project_mod_M,
    total_degree,
    xm_hat_degree,
)
from .parsing import ParseError, parse_vector, parse_word
from .scalar import RATIONALS, SYMBOLIC, ParamEnv, ScalarError, format_scalar

__all__ = [
    "D1", "D2", "E11", "E12", "E21", "E22",
    "AlgElement", "Atom", "MismatchError", "NilpotencyBoundError",
    "ad_e21", "bracket", "inv_e21", "theta_closed", "theta_series", "word_mul",
    "ModuleSpace", "Monomial", "MVector", "SpaceKind", "ValidityError", "ZeroVectorError",
    "format_vector", "homogeneous_components", "mono_mul", "project_mod_M",
    "total_degree", "xm_hat_degree",
    "NotWeightVectorError", "WeightValue", "act_element", "act_generator", "apply_E",
    "partial", "weight_of",
    "ParseError", "parse_vector", "parse_word",
    "RATIONALS", "SYMBOLIC", "ParamEnv", "ScalarError", "format_scalar",
]
