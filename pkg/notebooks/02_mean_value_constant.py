# %% [markdown]
# # The mean-value trace constant
#
# Over half-moons `E(theta, varphi)` in the unit ball the mean-value quotient
# peaks at the half-ball, where it equals `n w_n / (2 w_{n-1})`.  A grid
# sweep confirms this, and the grid certification checks every inequality
# used to show the quotient has no larger value.

# %%
from trace_sharp import constants, kmv_sweep, lemma_suite
from trace_sharp.mv import lambda_grid

# %%
for n in range(2, 9):
    r = kmv_sweep(n, 512)
    print(f"n={n}  grid max {r.max_value:.12f}  closed form {r.closed_form:.12f}  at {r.argmax}")

# %% [markdown]
# The auxiliary function `F(t, s)` is non-positive on its domain.  In higher
# dimensions it gets very close to zero along `t -> pi/2` too, not just at the
# corner `(0, 0)`.

# %%
for n in (2, 4, 8):
    t, s, v = lambda_grid(n, 400)
    near = (v > -1e-6).sum()
    print(f"n={n}  max F = {v.max():.2e}  cells with F > -1e-6: {near}")

# %%
rep = lemma_suite(4, 400)
for c in rep.checks:
    print(f"{c.name:35s} worst {c.worst_violation: .3e}  {'ok' if c.passed else 'FAIL'}")
