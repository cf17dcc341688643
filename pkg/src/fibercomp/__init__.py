"""Compressions of fibered knot monodromies: classification, twist coefficients,
compression bodies and the ribbon obstruction they give."""

from .compression_enum import all_compressed_classes, is_disk_identity, minimal_compressions
from .fibered_knots import alexander, is_homotopy_ribbon, monodromy, parse_knot, predecessors
from .growth_rate import FreeGroupEndo, growth_estimate
from .nt_classify import canonical_key, classify, decompose, max_dilatation
from .surface_kernel import MappingClass, ParseError, parse_mapping_class, parse_surface

__version__ = "0.1.0"

__all__ = [
    "FreeGroupEndo",
    "MappingClass",
    "ParseError",
    "alexander",
    "all_compressed_classes",
    "canonical_key",
    "classify",
    "decompose",
    "growth_estimate",
    "is_disk_identity",
    "is_homotopy_ribbon",
    "max_dilatation",
    "minimal_compressions",
    "monodromy",
    "parse_knot",
    "parse_mapping_class",
    "parse_surface",
    "predecessors",
]
