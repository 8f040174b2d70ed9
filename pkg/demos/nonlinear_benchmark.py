"""
A nonlinear multi-order benchmark
=================================

Solve

    D^2.55 x + 2 D^1.07621 x + 0.5 D^0.00196 x + x^3 = f(t),   x(0)=x'(0)=x''(0)=0

whose exact solution is ``t^3 / 3``, then refine the grid.
"""

import numpy as np

from hybridfrac import oracle
from hybridfrac.expr import evaluate
from hybridfrac.solver import solve

case = oracle.get_cases("5.4-3")[0]
print(case.label)
for tm in case.problem.terms:
    print(f"  term: order {tm.beta:g}, power {tm.power:g}")

###############################################################################
# At the published grid (h = 1/500) the maximum node error matches the
# published value to the printed digits.

sol = solve(case.problem, case.m)
t = sol.grid.nodes()
err = np.max(np.abs(sol.y.node_values() - evaluate(case.exact, t)))
print(f"\nm={case.m}: max error {err:.6e} (published {case.paper_error:.6e})")
print(f"fixed-point iterations per node: max {sol.max_iterations}, residual {sol.residual:.1e}")

###############################################################################
# The error comes from approximating ``D^2.55 x``, which behaves like
# ``t^0.45`` near the origin, by a piecewise-linear function. Halving h
# should cut the error by about 2^1.45 = 2.73:

prev = None
for m in (125, 250, 500, 1000, 2000):
    s = solve(case.problem, m)
    e = np.max(np.abs(s.y.node_values() - evaluate(case.exact, s.grid.nodes())))
    rate = "" if prev is None else f"  ratio {prev / e:.2f}"
    print(f"m={m:5d}  error {e:.3e}{rate}")
    prev = e
