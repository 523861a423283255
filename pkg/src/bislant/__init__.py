"""Pointwise bi-slant submanifolds of metallic Riemannian manifolds, numerically.

Immersions ``U subset R^k -> R^m`` are given as expressions; the ambient
space is Euclidean ``R^m`` with a constant metallic structure ``J``.
"""

from .dsl import parse_expression
from .errors import BislantError
from .geometry import PointGeometry
from .immersion import FrameData, ImmersionSpec, frame_at, parse_immersion
from .metallic import AmbientStructure, MetallicParams, diagonal_structure, from_almost_product, make_params
from .registry import registry_get, resolve_target
from .report import Report, RunConfig, emit, run
from .slant import Distribution, classify_bislant, pointwise_slant_test, wirtinger_angle
from .split import SplitOperators, split_J

__all__ = [
    "AmbientStructure", "BislantError", "Distribution", "FrameData", "ImmersionSpec", "MetallicParams",
    "PointGeometry", "Report", "RunConfig", "SplitOperators", "classify_bislant", "diagonal_structure",
    "emit", "frame_at", "from_almost_product", "make_params", "parse_expression", "parse_immersion",
    "pointwise_slant_test", "registry_get", "resolve_target", "run", "split_J", "wirtinger_angle",
]
