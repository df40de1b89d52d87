"""Phase portraits of holomorphic, inverse, conjugate and Moebius vector fields."""

import json

from . import _core
from ._core import (
    HoloError,
    first_integral,
    integrate,
    levels_svg,
    normalize,
    portrait_svg,
    travel_time,
)

__all__ = [
    "HoloError",
    "analyze",
    "catalog",
    "classify",
    "equilibria",
    "first_integral",
    "integrate",
    "levels_svg",
    "normalize",
    "portrait_svg",
    "travel_time",
]


def analyze(expr, rtol=1e-10, atol=1e-12):
    """Full report: equilibria, infinity, first integral, separatrices, label."""
    return json.loads(_core.analyze_json(expr, rtol, atol))


def classify(expr):
    """Catalog label, confidence and signature."""
    return json.loads(_core.classify_json(expr))


def equilibria(expr):
    return json.loads(_core.equilibria_json(expr))


def catalog(family=""):
    return json.loads(_core.catalog_json(family))
