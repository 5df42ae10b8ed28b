# %% [markdown]
# # Checking the trace inequalities on functions and sets
#
# Radial layer-cake functions (sums of nested cap indicators) have closed-form
# total variation, mean, median and boundary trace.  Random samples stay
# below the sharp constants, and the half-ball and solved half-moon attain
# them.  In the disk, random convex polygons, half-planes and caps are
# clipped exactly against the circle.

# %%
import math

import numpy as np

from trace_sharp import bvcheck, constants, solve
from trace_sharp.geometry import HalfMoonParams

# %%
rng = np.random.default_rng(7)
worst = 0.0
for _ in range(2000):
    u = bvcheck.random_layer_cake(rng, 3)
    worst = max(worst, bvcheck.trace_gap_mv(u) / (constants(3).k_mv * bvcheck.total_variation(u)))
print("worst mean-value ratio", worst)

# %%
hb = bvcheck.LayerCakeFunction(3, (math.pi / 2,), (1.0,))
print(bvcheck.trace_gap_mv(hb) / bvcheck.total_variation(hb), constants(3).k_mv)
sol = solve(0.7, 3)
moon = bvcheck.HalfMoonIndicator(HalfMoonParams(sol.theta_sigma, sol.varphi_sigma, 3))
print(bvcheck.trace_gap_med(moon, 0.7) / bvcheck.total_variation(moon), sol.k_med)

# %%
for check in bvcheck.verify_suite(2, count=500, seed=1):
    print(f"{check.name:40s} {check.worst_ratio:.9f}  {'ok' if check.passed else 'FAIL'}")

# %%
rep = bvcheck.oracle_sample(seed=3, count=2000, sigma=0.5)
print(rep.max_q_mv, rep.k_mv, rep.max_q_med, rep.k_med, len(rep.violations()))
