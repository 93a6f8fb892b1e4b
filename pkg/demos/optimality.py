"""The sinc-power example: measured mass on the periodic set against its bound,
and how that mass actually scales with gamma.

Run: python3 demos/optimality.py
"""
import math

import numpy as np

from lsverify.verify import optimality_example

gammas = (0.05, 0.1, 0.175, 0.25, 0.4)
for alpha in (2, 3, 4):
    res = [optimality_example(alpha, g, fft=False) for g in gammas]
    slope = np.polyfit(np.log(gammas), [math.log(r.norm_sq_omega) for r in res], 1)[0]
    print(f"alpha={alpha}  full norm^2={res[0].norm_sq_full:.4g}")
    for g, r in zip(gammas, res):
        print(f"   gamma={g:<6} omega mass={r.norm_sq_omega:.4e}  bound={r.paper_bound:.4e}  holds={r.holds}")
    print(f"   log-log slope {slope:.3f}; bound exponent {2 * alpha - 2}; zeros of sin at the"
          f" half-integers suggest {2 * alpha + 1}")
