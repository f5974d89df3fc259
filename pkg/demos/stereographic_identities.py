"""
Plane versus sphere
===================

The Coulomb gas energy with V = log(1 + |x|^2) is the log energy of the
stereographic images together with the north pole, up to a pair-count
constant. Rotations of the sphere act on the plane as Mobius maps and
leave everything invariant.
"""

import math

import numpy as np

from logsphere.energy import hamiltonian_w, log_energy_sphere, mobius_energy_identity_check, splitting_report
from logsphere.geometry import MobiusMap, chordal_distance, stereographic
from logsphere.identities import run_all

rng = np.random.default_rng(0)
x = rng.standard_normal((7, 2))
n = len(x)

y = np.vstack([stereographic(x), [0.0, 0.0, 1.0]])
print("w_n                      ", hamiltonian_w(x))
print("E(images + N) + n(n+1)log2", log_energy_sphere(y) + n * (n + 1) * math.log(2))

print("chordal distance", chordal_distance(x[0], x[1]),
      "vs", np.linalg.norm(stereographic(x[0]) - stereographic(x[1])))

phi = MobiusMap.random_rotation(rng)
print("rotation residual ", mobius_energy_identity_check(x, phi))
print("inversion residual", mobius_energy_identity_check(x, MobiusMap.inversion()))

rep = splitting_report(x)
print("splitting:", rep)

for name, (r, tol, ok) in run_all().items():
    print(f"{name:18s} {r:.2e} < {tol:.0e}: {ok}")
