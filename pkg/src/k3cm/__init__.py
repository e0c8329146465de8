"""Reduction invariants of K3 surfaces with complex multiplication."""

from __future__ import annotations

import logging

from .crystal import (
    LocalFieldData,
    artin_invariant_via_cokernel,
    bk_symbolic,
    build_beta,
    fixed_module_basis,
    specialize_mod_u,
)
from .errors import InconsistentData, InternalError, InvalidInput, K3CMError, PrecisionError
from .fields import Biquadratic, Cyclotomic, ImagQuadratic, analyze_place
from .frobenius import FrobCharPoly, analyze
from .kummer import KummerInput, counterexample_report, kummer_cm_data
from .lattices import GramMatrix
from .predictor import K3CmInput, ReductionReport, cross_validate, predict_reduction, predict_singular

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"

__all__ = [
    "Biquadratic",
    "Cyclotomic",
    "FrobCharPoly",
    "GramMatrix",
    "ImagQuadratic",
    "InconsistentData",
    "InternalError",
    "InvalidInput",
    "K3CMError",
    "K3CmInput",
    "KummerInput",
    "LocalFieldData",
    "PrecisionError",
    "ReductionReport",
    "analyze",
    "analyze_place",
    "artin_invariant_via_cokernel",
    "bk_symbolic",
    "build_beta",
    "counterexample_report",
    "cross_validate",
    "fixed_module_basis",
    "kummer_cm_data",
    "predict_reduction",
    "predict_singular",
    "specialize_mod_u",
]
