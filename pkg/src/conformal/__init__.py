"""Conformal engine: closed-form maps, snowflake curves and boundary-fitted maps."""

from .maps import (
    CayleyMap,
    ChordalSlitMap,
    ComposedMap,
    ConformalMap,
    IdentityMap,
    KoebeMap,
    MobiusMap,
    RadialSlitMap,
    image_curve,
    map_from_dict,
    winding_number,
)
from .snowflake import koch_snowflake
from .zipper import BoundaryFittedMap, build_boundary_map

__all__ = [
    "BoundaryFittedMap",
    "CayleyMap",
    "ChordalSlitMap",
    "ComposedMap",
    "ConformalMap",
    "IdentityMap",
    "KoebeMap",
    "MobiusMap",
    "RadialSlitMap",
    "build_boundary_map",
    "image_curve",
    "koch_snowflake",
    "map_from_dict",
    "winding_number",
]
