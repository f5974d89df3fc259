"""
Minimal logarithmic energy on the sphere
========================================

Projected gradient descent with restarts recovers the classical minimizers
for small n; for larger n we get good local minima, which are upper bounds
for the true minimal energy.
"""

import math

from logsphere.optimizer import MinimizeOptions, minimize_log_energy, separation_check

opts = MinimizeOptions(restarts=10, seed=1)

exact = {2: -2 * math.log(2), 3: -3 * math.log(3), 4: -6 * math.log(8 / 3), 6: -18 * math.log(2)}
for n, e in exact.items():
    res = minimize_log_energy(n, opts)
    print(f"n={n:2d}  found {res.energy:+.12f}  exact {e:+.12f}  diff {res.energy - e:.1e}")

# Larger n: quasi-Newton directions speed things up considerably.
res = minimize_log_energy(60, MinimizeOptions(restarts=4, seed=1, lbfgs_memory=8))
print(f"n=60  energy {res.energy:.10f}  iterations {res.iterations}  converged {res.converged}")
print(f"min separation {res.min_separation:.4f} vs 1/sqrt(n-1) = {1 / math.sqrt(59):.4f}:",
      separation_check(res))
