"""Discrete logarithmic energies on the sphere and in the plane.

Every sum runs over ordered pairs ``i != j``, so each unordered pair is
counted twice.  Reported energies are accumulated with ``math.fsum`` and are
therefore exactly rounded: independent of summation order, point order and
thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CoincidentPoints, PoleOfPotential
from .geometry import mobius_apply
from .potential import canonical_equilibrium, canonical_potential, transform_potential, zeta

COINCIDENCE_TOL = 1e-14


def _points(cfg, dim=None):
    cfg = np.asarray(cfg, dtype=float)
    if cfg.ndim != 2 or (dim is not None and cfg.shape[1] != dim):
        raise ValueError(f"expected an (n, {dim or 'd'}) array, got shape {cfg.shape}")
    if cfg.shape[0] < 2:
        raise ValueError("a configuration needs at least two points")
    return cfg


@lru_cache(maxsize=64)
def _pair_indices(n):
    return np.triu_indices(n, k=1)


def _upper_distances(cfg):
    iu, ju = _pair_indices(cfg.shape[0])
    d = np.sqrt(np.sum((cfg[iu] - cfg[ju]) ** 2, axis=1))
    if np.any(d < COINCIDENCE_TOL):
        raise CoincidentPoints("configuration has coincident points")
    return d


def log_energy(cfg):
    """``-sum_{i != j} log|y_i - y_j|`` for points in any dimension."""
    d = _upper_distances(_points(cfg))
    return -2.0 * math.fsum(np.log(d))


def log_energy_sphere(cfg):
    """Logarithmic energy of an ``(n, 3)`` configuration on the unit sphere.

    >>> log_energy_sphere([[0, 0, 1], [0, 0, -1]])  # doctest: +ELLIPSIS
    -1.386294361...
    """
    return log_energy(_points(cfg, 3))


def _potential_sum(x, V):
    vals = np.asarray(V(x), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise PoleOfPotential("potential is not finite at a configuration point")
    return math.fsum(vals)


def hamiltonian_w(x, V=canonical_potential):
    """Coulomb gas energy ``-sum_{i != j} log|x_i - x_j| + n sum_i V(x_i)``."""
    x = _points(x, 2)
    n = x.shape[0]
    return log_energy(x) + n * _potential_sum(x, V)


def hamiltonian_wbar(x):
    """``-sum_{i != j} log|x_i - x_j| + (n - 1) sum_i log(1 + |x_i|^2)``.

    Equals the log energy of the images on the radius-1/2 sphere, hence
    ``hamiltonian_wbar(x) - n (n - 1) log 2`` is the unit-sphere energy of
    ``stereographic(x)``.
    """
    x = _points(x, 2)
    n = x.shape[0]
    return log_energy(x) + (n - 1) * math.fsum(np.log1p(np.sum(x * x, axis=1)))


@dataclass(frozen=True)
class SplittingReport:
    """Terms of ``w_n = n^2 I_V - (n/2) log n + W/pi + 2n sum zeta``.

    ``renormalized_term`` is the finite-n renormalized energy over pi,
    defined as whatever the other three terms leave of ``w_n``.
    """

    n: int
    w_n: float
    i_v_term: float
    log_term: float
    renormalized_term: float
    zeta_sum: float

    def reassembled(self):
        return self.i_v_term + self.log_term + self.renormalized_term + self.zeta_sum

    @property
    def renormalized_per_point(self):
        """``W(nabla H'_n, 1) / (n pi)``, the quantity whose limit is alpha_V."""
        return self.renormalized_term / self.n


def splitting_report(x, eq=None):
    eq = canonical_equilibrium() if eq is None else eq
    x = _points(x, 2)
    n = x.shape[0]
    w_n = hamiltonian_w(x, eq.potential)
    i_v_term = n * n * eq.i_v
    log_term = -0.5 * n * math.log(n)
    zeta_sum = 2 * n * math.fsum(zeta(x, eq))
    renormalized = w_n - i_v_term - log_term - zeta_sum
    return SplittingReport(n, w_n, i_v_term, log_term, renormalized, zeta_sum)


def euclidean_grad_log_energy(cfg):
    """Gradient of the ordered-pair log energy w.r.t. each point, ``(n, d)``."""
    cfg = _points(cfg)
    diff = cfg[:, None, :] - cfg[None, :, :]
    d2 = np.sum(diff * diff, axis=-1)
    np.fill_diagonal(d2, np.inf)
    if np.any(d2 < COINCIDENCE_TOL**2):
        raise CoincidentPoints("configuration has coincident points")
    return -2.0 * np.sum(diff / d2[:, :, None], axis=1)


def tangent_project(cfg, g):
    return g - np.sum(g * cfg, axis=1, keepdims=True) * cfg


def grad_log_energy_sphere(cfg):
    """Riemannian (tangent) gradient of the unit-sphere log energy."""
    cfg = _points(cfg, 3)
    return tangent_project(cfg, euclidean_grad_log_energy(cfg))


def sphere_energy_change(cfg, new):
    """``E(new) - E(cfg)`` for sphere configurations, computed from displacements.

    Separations are measured scale-free, ``|y_i - y_j|^2 / (|y_i| |y_j|)``,
    which agrees with the chord length of the normalized points to second
    order in the norm error; rounding in the norms therefore drops out.
    Each term is a ``log1p`` of an exactly computed displacement, so the
    result stays accurate relative to its own size even when it is far
    below the rounding error of ``E`` itself.  Used only for step
    acceptance, so plain (deterministic) numpy summation is enough.
    """
    cfg = np.asarray(cfg, dtype=float)
    new = np.asarray(new, dtype=float)
    n = cfg.shape[0]
    iu, ju = _pair_indices(n)
    step = new - cfg
    delta = cfg[iu] - cfg[ju]
    s = step[iu] - step[ju]
    ratio = np.sum(s * (2.0 * delta + s), axis=1) / np.sum(delta * delta, axis=1)
    if np.any(ratio <= -1.0):
        raise CoincidentPoints("step makes two points coincide")
    norm_ratio = np.sum(step * (2.0 * cfg + step), axis=1) / np.sum(cfg * cfg, axis=1)
    return float(-np.sum(np.log1p(ratio)) + 0.5 * (n - 1) * np.sum(np.log1p(norm_ratio)))


def mobius_energy_identity_check(y, phi, V=canonical_potential):
    """Residual of the change of variables for ``w_n`` under a Mobius map.

    Checks ``w_V(phi(y)) = w_{V_phi}(y) + sum log(1+|phi(y_i)|^2) - sum log(1+|y_i|^2)``.
    The identity rests on ``phi`` being a sphere rotation (unitary
    coefficient matrix); for other maps the residual is generically nonzero.
    """
    y = _points(y, 2)
    x = mobius_apply(phi, y)
    lhs = hamiltonian_w(x, V)
    v_phi = transform_potential(phi, V)
    rhs = (
        hamiltonian_w(y, v_phi)
        + math.fsum(np.log1p(np.sum(x * x, axis=1)))
        - math.fsum(np.log1p(np.sum(y * y, axis=1)))
    )
    return abs(lhs - rhs)
