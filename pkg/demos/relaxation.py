"""
Fractional relaxation from a problem file
=========================================

``D^0.5 y = -y`` with ``y(0) = 1`` has the Mittag-Leffler solution
``E_{1/2}(-sqrt(t)) = exp(t) erfc(sqrt(t))``. The problem is written as a
JSON document, the same format the ``solve`` command reads.
"""

import json
import math
import tempfile
from pathlib import Path

import numpy as np

from hybridfrac.problemfile import load_problem
from hybridfrac.solver import solve

doc = {
    "alpha": 0.5,
    "terms": [{"coeff": "-1", "beta": 0}],
    "forcing": "0",
    "init": [1],
    "t_end": 2,
}
path = Path(tempfile.mkdtemp()) / "relaxation.json"
path.write_text(json.dumps(doc, indent=2))
problem, _ = load_problem(path)

###############################################################################
# The sqrt(t) singularity at the origin caps convergence at first order.

exact = np.vectorize(lambda x: math.exp(x) * math.erfc(math.sqrt(x)))
for m in (50, 100, 200, 400, 800):
    sol = solve(problem, m)
    t = sol.grid.nodes()
    err = np.max(np.abs(sol.y.node_values() - exact(t)))
    print(f"m={m:4d}  y(2)={sol.y.node_values()[-1]:.8f}  max error {err:.3e}")

print(f"\nexact y(2) = {exact(2.0):.8f}")
print(f"same problem from the shell: hybridfrac solve {path} --m 400")
