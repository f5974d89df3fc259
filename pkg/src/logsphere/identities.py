"""Self-test suites: exact identities checked on random inputs.

Each suite returns the largest residual it saw; :data:`SUITES` pairs it with
the threshold it must stay below.
"""

from __future__ import annotations

import math

import numpy as np

from .energy import (
    hamiltonian_w,
    hamiltonian_wbar,
    log_energy,
    log_energy_sphere,
    mobius_energy_identity_check,
    splitting_report,
)
from .geometry import MobiusMap, chordal_distance, half_sphere_map, stereographic
from .lattice import chowla_selberg_check, reduce_tau, scale_w, w_density1, w_lattice, LatticeShape

LOG2 = math.log(2.0)


def _planar(rng, n, scale=2.0):
    return rng.standard_normal((n, 2)) * scale


def distance_identity(rng, pairs=1000):
    x = _planar(rng, pairs, 3.0)
    y = _planar(rng, pairs, 3.0)
    direct = np.linalg.norm(stereographic(x) - stereographic(y), axis=1)
    return float(np.max(np.abs(chordal_distance(x, y) - direct)))


def wminimizer_correspondence(rng, sizes=range(2, 13)):
    """Planar energies against sphere energies of the stereographic images.

    ``wbar_n(x)`` is the energy of ``T(x)`` on the radius-1/2 sphere and
    ``w_n(x)`` that of ``T(x)`` plus the north pole; on the unit sphere each
    of the ``k`` ordered pairs gains ``-log 2``.
    """
    worst = 0.0
    north = np.array([[0.0, 0.0, 1.0]])
    for n in sizes:
        x = _planar(rng, n)
        half = half_sphere_map(x)
        unit = stereographic(x)
        worst = max(
            worst,
            abs(hamiltonian_wbar(x) - log_energy(half)),
            abs(hamiltonian_wbar(x) - n * (n - 1) * LOG2 - log_energy_sphere(unit)),
            abs(hamiltonian_w(x) - log_energy(np.vstack([half, north]))),
            abs(hamiltonian_w(x) - (n + 1) * n * LOG2 - log_energy_sphere(np.vstack([unit, north]))),
        )
    return worst


def mobius_chvar(rng, trials=20):
    worst = 0.0
    for k in range(trials):
        phi = MobiusMap.inversion() if k == 0 else MobiusMap.random_rotation(rng)
        y = _planar(rng, 2 + k % 10)
        worst = max(worst, mobius_energy_identity_check(y, phi))
    return worst


def splitting_reassembly(rng, trials=20):
    worst = 0.0
    for k in range(trials):
        rep = splitting_report(_planar(rng, 2 + k))
        worst = max(worst, abs(rep.reassembled() - rep.w_n))
    return worst


def chowla_selberg(rng=None):
    return chowla_selberg_check()


def scaling_law(rng, trials=20):
    worst = 0.0
    for _ in range(trials):
        tau = reduce_tau(complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 3.0)))
        m = rng.uniform(0.1, 5.0)
        w1 = w_density1(tau)
        wm = w_lattice(LatticeShape(tau, m))
        w2m = w_lattice(LatticeShape(tau, 2 * m))
        # W_{2m} from W_m by one more application of the law
        via_m = 2 * m * (wm / m - 0.5 * math.pi * math.log(2))
        worst = max(worst, abs(w2m - via_m), abs(wm - scale_w(w1, m)))
    return worst


SUITES = {
    "distance_identity": (distance_identity, 1e-13),
    "wminimizer": (wminimizer_correspondence, 1e-10),
    "mobius_chvar": (mobius_chvar, 1e-10),
    "splitting": (splitting_reassembly, 1e-12),
    "chowla_selberg": (chowla_selberg, 1e-12),
    "scaling_law": (scaling_law, 1e-12),
}


def run_all(seed=0):
    """``{name: (max_residual, threshold, passed)}`` for every suite."""
    out = {}
    for name, (fn, tol) in SUITES.items():
        rng = np.random.default_rng([seed, len(out)])
        r = fn(rng)
        out[name] = (r, tol, r < tol)
    return out
