# %% [markdown]
# # The median trace constant and its extremal half-moon
#
# For volume fraction `sigma` the volume constraint ties `theta` to `varphi`.
# Along that curve the median quotient `G` has one interior maximum, where
# `G = 1 / cos(theta - varphi)`.

# %%
import math

import numpy as np

from trace_sharp import c_med, kmed_sweep, solve
from trace_sharp.med import curve_values

# %%
for sigma in (0.1, 0.3, 0.5, 0.7, 0.9):
    s = solve(sigma, 2)
    print(f"sigma={sigma}  theta={s.theta_sigma:.12f}  varphi={s.varphi_sigma:.12f}  "
          f"K={s.k_med:.12f}  residual={s.residual_sys:.1e}")

# %% [markdown]
# In the plane the extremal always satisfies `theta = 2 varphi`.  At
# `sigma = 1/2` the volume constraint then reads
# `sin(2 varphi) / 2 - varphi cos(2 varphi) = pi / 4`.

# %%
s = solve(0.5, 2)
p = s.varphi_sigma
print(s.theta_sigma - 2 * p, math.sin(2 * p) / 2 - p * math.cos(2 * p) - math.pi / 4)

# %% [markdown]
# The solver agrees with a brute-force sweep of the curve.

# %%
for n in (2, 3, 4):
    print(n, solve(0.5, n).k_med, kmed_sweep(0.5, n, 4096))

# %%
grid = np.linspace(0.01, math.pi - 0.01, 8)
print(np.round(curve_values(grid, 0.3, 2), 6))
print(c_med(0.3), c_med(0.7))
