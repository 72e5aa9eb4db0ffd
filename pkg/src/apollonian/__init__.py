"""Integral Apollonian circle packings: enumeration, orbits, prime statistics."""

from .core import (PRESETS, PackingDescriptor, Quadruple, apply_generator, bugeye, coins,
                   descartes_form, packing_from_spec, reduce_to_root, validate_packing)
from .enumerate import (CurvatureHistogram, TraversalConfig, count_circles, count_tangent_pairs,
                        histogram, per_coordinate_counts, traverse, walk)
from .errors import ApollonianError, CapacityError, UsageError

__version__ = "0.1.0"

__all__ = [
    "PRESETS", "PackingDescriptor", "Quadruple", "apply_generator", "bugeye", "coins",
    "descartes_form", "packing_from_spec", "reduce_to_root", "validate_packing",
    "CurvatureHistogram", "TraversalConfig", "count_circles", "count_tangent_pairs",
    "histogram", "per_coordinate_counts", "traverse", "walk",
    "ApollonianError", "CapacityError", "UsageError",
]
