"""Coefficient arithmetic, localized polynomials and matrix algebra."""
from __future__ import annotations

from .coeff import ModeError, PrecisionError, TruncatedCoeff, invert_unit
from .linalg import Echelon, F2Matrix, f2_kernel_basis, f2_rank, f2_rank_columns, f2_solve, snf, snf_divisors
from .loc import LocElem, delta_power, loc_add, loc_mul, reduce_fraction, v2_power
from .poly import BasePoly, divmod_v2, mono_degree

__all__ = [
    "BasePoly",
    "Echelon",
    "F2Matrix",
    "LocElem",
    "ModeError",
    "PrecisionError",
    "TruncatedCoeff",
    "delta_power",
    "divmod_v2",
    "f2_kernel_basis",
    "f2_rank",
    "f2_rank_columns",
    "f2_solve",
    "invert_unit",
    "loc_add",
    "loc_mul",
    "mono_degree",
    "reduce_fraction",
    "snf",
    "snf_divisors",
    "v2_power",
]
