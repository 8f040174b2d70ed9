"""
Fractional integrals of a ramp
==============================

The hybrid-function representation of ``f(t) = t`` on a uniform grid is
exact, and so are the one-shot integration matrices at the nodes. This
script integrates the ramp for orders 0.5 to 5 and compares with
``G(2) / G(2 + a) * t^(1 + a)``.
"""

import numpy as np

from hybridfrac import Grid, frac_integrate, gamma, sample

grid = Grid(1.0, 8)
t = grid.nodes()
ramp = sample(lambda x: x, grid)

###############################################################################
# One matrix application per order; node values are compared in the max norm.

print(f"{'alpha':>6}  {'J^a t at t=1':>22}  {'max node error':>15}")
for alpha in np.arange(0.5, 5.01, 0.5):
    out = frac_integrate(ramp, alpha).node_values()
    exact = gamma(2) / gamma(2 + alpha) * t ** (1 + alpha)
    print(f"{alpha:6.1f}  {out[-1]:22.17g}  {np.max(np.abs(out - exact)):15.3e}")

###############################################################################
# Between nodes the result is only piecewise linear. With 8 subintervals the
# midpoint error of the half-order integral is visible:

from hybridfrac import evaluate

out = frac_integrate(ramp, 0.5)
mid = t[:-1] + grid.h / 2
gap = np.max(np.abs(evaluate(out, mid) - gamma(2) / gamma(2.5) * mid**1.5))
print(f"\nmax midpoint error for alpha=0.5: {gap:.3e}")
