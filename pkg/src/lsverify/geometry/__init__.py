"""Domains, thick sets, shapes, thickness and quadrature."""
from .domains import (Domain, EquilateralTriangle, ExtendedInterval, GeneralizedRectangle,
                      Product, RightTriangle, Sector, as_rectangle, tan_cot)
from .measure import ThicknessResult, cube_witness, intersect_volume, thickness_of, window_volume
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate_many, integrate_on
from .shapes import Box, Polygon, ProductShape, clip_volume, diameter, image_ratio, simplify
from .thick import BoxUnion, FullSpace, PeriodicBoxUnion, ThickSet

__all__ = [
    "Box", "BoxUnion", "DEFAULT_SPEC", "Domain", "EquilateralTriangle", "ExtendedInterval",
    "FullSpace", "GeneralizedRectangle", "PeriodicBoxUnion", "Polygon", "Product",
    "ProductShape", "QuadratureSpec", "RightTriangle", "Sector", "ThickSet", "ThicknessResult",
    "as_rectangle", "clip_volume", "cube_witness", "diameter", "image_ratio", "integrate_many",
    "integrate_on", "intersect_volume", "simplify", "tan_cot", "thickness_of", "window_volume",
]
