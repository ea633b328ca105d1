"""Monomial-Cartesian codes over finite fields and multikernel polar codes."""

from .channels import Channel, bhattacharyya, is_sof, qec, qsc, split_exact, symmetric_rate
from .estimators import DecreasingMonomialCartesianCode, PolarCodeConstructor
from .evalcode import CartesianGrid, EvalCode, dual_basis, min_distance_bruteforce
from .exceptions import (
    BoxError,
    CertificateError,
    ConfigError,
    DimensionError,
    FieldError,
    GuardError,
    NotDecreasingError,
    PolarcartError,
)
from .gf import Field, FieldElement, field_new
from .kernels import KernelSequence, exponent, kernel_matrix, standard_form_search
from .monomials import MonomialBox, MonomialSet, PolarOrder, divisibility_closure
from .polarize import (
    InfoSet,
    SyntheticStats,
    information_set,
    polar_pipeline,
    qec_synthetic_exact,
    qec_synthetic_mc,
    synthetic_stats,
)

__version__ = "0.1.0"

__all__ = [
    "BoxError", "CartesianGrid", "CertificateError", "Channel", "ConfigError",
    "DecreasingMonomialCartesianCode", "DimensionError", "EvalCode", "Field", "FieldElement",
    "FieldError", "GuardError", "InfoSet", "KernelSequence", "MonomialBox", "MonomialSet",
    "NotDecreasingError", "PolarCodeConstructor", "PolarOrder", "PolarcartError",
    "SyntheticStats", "bhattacharyya", "divisibility_closure", "dual_basis", "exponent",
    "field_new", "information_set", "is_sof", "kernel_matrix", "min_distance_bruteforce",
    "polar_pipeline", "qec", "qec_synthetic_exact", "qec_synthetic_mc", "qsc",
    "split_exact", "standard_form_search", "symmetric_rate", "synthetic_stats",
]
