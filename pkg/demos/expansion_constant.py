"""
The order-n term of the minimal energy
======================================

E(n) = (1/2 - log 2) n^2 - (n/2) log n + C n + o(n). We minimize for a few
n, fit C and compare it with the conjectured value C_BHS and the proven
lower bound. Set N_MAX higher for a better estimate (slower).
"""

import math

from logsphere.asymptotics import expansion_report
from logsphere.optimizer import MinimizeOptions, energy_table

N_MAX = 80
opts = MinimizeOptions(restarts=6, grad_tol=1e-7, lbfgs_memory=8, seed=0)
table = energy_table(range(10, N_MAX + 1, 10), opts)

rep = expansion_report(table, model="power")
for row in rep["residuals"]:
    print(f"n={row['n']:3d}  E={row['e_min']:.6f}  r_n={row['r_n']:+.6f}")
print(f"fitted C = {rep['c_hat']:.5f} (exponent {rep['exponent']})")
print(f"bounds [{rep['lower_bound_c']:.5f}, {rep['upper_bound_c']:.5f}], gap {rep['gap']:+.5f}")

# The plain tail mean is a cruder but model-free estimate.
print("tail mean:", expansion_report(table, model="mean")["c_hat"])
