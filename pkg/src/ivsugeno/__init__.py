"""Interval-valued Sugeno-like FG-functionals over admissible orders."""

__version__ = "0.1.0"

from .errors import IvSugenoError, WDSViolation
from .functional import FGFunctional, iv_sugeno_fg, make_functional, scalar_fg, scalar_sugeno, wds_check
from .intervals import AdmissibleOrder, Interval, make_interval
from .measures import IvFuzzyMeasure, cardinality_measure, power_measure, table_measure
from .miv import MivSpec, miv_apply, preset_catalog
from .properties import property_suite

__all__ = [
    "AdmissibleOrder",
    "FGFunctional",
    "Interval",
    "IvFuzzyMeasure",
    "IvSugenoError",
    "MivSpec",
    "WDSViolation",
    "cardinality_measure",
    "iv_sugeno_fg",
    "make_functional",
    "make_interval",
    "miv_apply",
    "power_measure",
    "preset_catalog",
    "property_suite",
    "scalar_fg",
    "scalar_sugeno",
    "table_measure",
    "wds_check",
]
