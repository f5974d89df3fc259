"""
Renormalized energy of planar lattices
======================================

W of a Bravais lattice depends only on its shape tau (up to rotation,
reflection and change of basis) and its density. At density one the
triangular lattice has the smallest value.
"""

import math

import numpy as np

from logsphere import lattice as lat

# The same lattice written in two bases reduces to the same shape.
u, v = np.array([1.0, 0.0]), np.array([0.3, 1.7])
a = lat.reduce_lattice(lat.BravaisLattice(tuple(u), tuple(v)))
b = lat.reduce_lattice(lat.BravaisLattice(tuple(2 * u + v), tuple(u + v)))
print("shape from two bases:", a.tau, b.tau)

# W at density one for the two classical shapes.
tri = lat.w_density1(lat.TAU_TRI)
sq = lat.w_density1(lat.TAU_SQUARE)
print(f"triangular W = {tri:.10f}  (closed form {lat.w_triangular_closed_form():.10f})")
print(f"square     W = {sq:.10f}")

# Scaling in the density: W_m = m (W_1 - pi/2 log m).
for m in (0.5, 1.0, 2.0, 4.0):
    print(f"m = {m:3.1f}  W = {lat.scale_w(tri, m):+.6f}")

# Coarse scan of the fundamental domain; the minimum sits at the corner tau_tri.
res = lat.minimality_scan(64, 64, 3.0)
print(f"grid minimum at tau = {res.tau:.6f}, W = {res.value:.7f}, margin {res.margin:.2e}")

# Chowla-Selberg: |eta(tau_tri)|^4 in closed form.
print("Chowla-Selberg residual:", lat.chowla_selberg_check())
print("C_BHS =", lat.paper_constants().c_bhs, " consistency:",
      tri / math.pi + 0.5 * math.log(math.pi) + math.log(2) - lat.c_bhs())
