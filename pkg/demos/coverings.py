"""Build and validate the coverings for each supported domain.

Run: python3 demos/coverings.py
"""
import math

from lsverify.covering import build_covering, validate_covering
from lsverify.geometry import (Box, EquilateralTriangle, ExtendedInterval, GeneralizedRectangle,
                               QuadratureSpec, RightTriangle, Sector)

spec = QuadratureSpec(mc_samples=200_000, seed=1)
cases = [
    ("interval (0, 2.5)", GeneralizedRectangle((ExtendedInterval(0, 2.5),)), 1.0, None),
    ("unit square", GeneralizedRectangle((ExtendedInterval(0, 1), ExtendedInterval(0, 1))), 0.1, None),
    ("sector of angle pi/6", Sector(6), 1.0, Box((0, 0), (10, 10))),
    ("right triangle, angle pi/3", RightTriangle(3, 5.0), 1.0, None),
    ("equilateral triangle", EquilateralTriangle(3 * math.sqrt(3)), 1.0, None),
]

for name, dom, rho, window in cases:
    cov = build_covering(dom, rho, window)
    rep = validate_covering(cov, spec)
    kappa, rho_, l, eta = cov.params
    print(f"{name:28s} {len(cov.elements):4d} elements  kappa={kappa} l=({', '.join(f'{v:.3f}' for v in l)})"
          f" eta={eta:.4f}  uncovered={rep.uncovered_fraction:.1e}  overlap<={rep.max_overlap_measured}"
          f"  {'ok' if rep.passed else 'FAILED'}")

# Tiles of side sqrt(3)*rho are too small to hold a rho-square.
cov = build_covering(EquilateralTriangle(3 * math.sqrt(3)), 1.0, narrow_tiles=True)
rep = validate_covering(cov, spec)
print("equilateral, tile side sqrt3*rho: cube check per element:",
      sorted({c.cube_ok for c in rep.per_element}))
