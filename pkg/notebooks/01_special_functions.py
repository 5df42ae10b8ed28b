# %% [markdown]
# # Sine-power integrals and ball constants
#
# `psi(k, t)` is the integral of `sin(s)**k` over `[0, t]` and `phi(k, t)` the
# integral of `cos(s)**k`.  Both come from the two-step reduction recurrence,
# with a power series for small `t` where the recurrence loses digits.

# %%
import math

import numpy as np

from trace_sharp.special import constants, phi, psi, psi_quadrature_oracle

# %% [markdown]
# Compare with adaptive Simpson quadrature on a grid of angles.

# %%
ts = np.linspace(0.0, math.pi, 50)
for k in (0, 1, 4, 9, 12):
    gap = max(abs(psi(k, t) - psi_quadrature_oracle(k, t)) for t in ts)
    print(f"k={k:2d}  max |psi - quadrature| = {gap:.1e}")

# %% [markdown]
# Small angles: `psi(k, t)` behaves like `t**(k+1) / (k+1)`, and the series
# branch keeps full relative accuracy there.

# %%
for t in (1e-2, 1e-4, 1e-8):
    print(t, psi(4, t), t**5 / 5)

# %% [markdown]
# Volume of the ball from its slices and the reflection symmetry.

# %%
for n in range(2, 7):
    c = constants(n)
    print(n, c.omega_n, c.omega_nm1 * psi(n, math.pi), c.k_mv)
print(abs(psi(3, math.pi) - psi(3, 1.0) - psi(3, math.pi - 1.0)))
print(phi(2, math.pi / 2), math.pi / 4)
