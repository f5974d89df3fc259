"""Minimize the logarithmic energy of n points on the unit sphere.

Projected Riemannian gradient descent: the Euclidean gradient is projected
onto the tangent planes, a backtracking Armijo search picks the step and
points are pulled back to the sphere by normalization.  Each restart starts
from a perturbed generalized spiral and is fully determined by
``(seed, restart index)``, so results do not depend on how many workers run
the restarts.

Results are local minima and hence upper bounds for the minimal energy.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .energy import sphere_energy_change, log_energy_sphere, tangent_project
from .errors import CoincidentPoints, NoProgress

logger = logging.getLogger(__name__)

MIN_STEP = 1e-18
TIE_TOL = 1e-12
THREADS_ENV = "LOGSPHERE_THREADS"


@dataclass(frozen=True)
class MinimizeOptions:
    """Knobs of :func:`minimize_log_energy`.

    ``init`` is ``"spiral"`` (spiral plus tangent noise of size 0.5/sqrt(n)),
    ``"random"`` (uniform on the sphere) or an ``(n, 3)`` array used as-is
    by restart 0 and perturbed for later restarts.  ``step0`` defaults to
    ``1/n``.  ``lbfgs_memory > 0`` switches on limited-memory quasi-Newton
    directions; it is off by default.
    """

    restarts: int = 20
    max_iters: int = 20000
    grad_tol: float = 1e-9
    seed: int = 0
    init: object = "spiral"
    step0: float | None = None
    armijo_c: float = 1e-4
    shrink: float = 0.5
    lbfgs_memory: int = 0
    workers: int | None = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not 0 < self.armijo_c < 1 or not 0 < self.shrink < 1:
            raise ValueError("armijo_c and shrink must lie in (0, 1)")
        if isinstance(self.init, str) and self.init not in ("spiral", "random"):
            raise ValueError(f"unknown init {self.init!r}")


@dataclass(frozen=True)
class MinimizeResult:
    best: np.ndarray = field(repr=False)
    energy: float
    grad_norm: float
    iterations: int
    restarts_used: int
    converged: bool
    min_separation: float
    restart_energies: tuple = field(default=(), repr=False)

    @property
    def n(self):
        return self.best.shape[0]


def spiral_points(n):
    """Generalized Fibonacci spiral of n points on the unit sphere."""
    k = np.arange(n)
    z = 1.0 - (2.0 * k + 1.0) / n
    r = np.sqrt(1.0 - z * z)
    phi = k * math.pi * (3.0 - math.sqrt(5.0))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _normalize(y):
    return y / np.linalg.norm(y, axis=1, keepdims=True)


def initial_configuration(n, init, rng, restart):
    if isinstance(init, str) and init == "random":
        return _normalize(rng.standard_normal((n, 3)))
    if isinstance(init, str):
        base = spiral_points(n)
    else:
        base = _normalize(np.array(init, dtype=float))
        if base.shape != (n, 3):
            raise ValueError(f"provided configuration has shape {base.shape}, expected {(n, 3)}")
        if restart == 0:
            return base
    noise = tangent_project(base, rng.standard_normal((n, 3))) * (0.5 / math.sqrt(n))
    return _normalize(base + noise)


@lru_cache(maxsize=64)
def _pairs(n):
    return np.triu_indices(n, k=1)


def _tangent_grad(y):
    diff = y[:, None, :] - y[None, :, :]
    d2 = np.sum(diff * diff, axis=-1)
    np.fill_diagonal(d2, np.inf)
    if np.any(d2 < 1e-28):
        raise CoincidentPoints("configuration has coincident points")
    g = -2.0 * np.sum(diff / d2[:, :, None], axis=1)
    return tangent_project(y, g)


def _lbfgs_direction(g, s_hist, y_hist):
    q = g.ravel().copy()
    alphas = []
    for s, yv in zip(reversed(s_hist), reversed(y_hist)):
        rho = 1.0 / np.dot(yv, s)
        a = rho * np.dot(s, q)
        alphas.append((a, rho, s, yv))
        q -= a * yv
    s, yv = s_hist[-1], y_hist[-1]
    q *= np.dot(s, yv) / np.dot(yv, yv)
    for a, rho, s, yv in reversed(alphas):
        b = rho * np.dot(yv, q)
        q += (a - b) * s
    return -q.reshape(g.shape)


@dataclass
class _Run:
    y: np.ndarray
    iterations: int
    grad_norm: float
    converged: bool
    stalled_at_start: bool
    trace: list | None = None


def descend(y0, opts, trace=False):
    """Run projected descent from ``y0``; returns the final iterate and diagnostics."""
    y = _normalize(np.asarray(y0, dtype=float))
    n = y.shape[0]
    step = opts.step0 if opts.step0 is not None else 1.0 / n
    g = _tangent_grad(y)
    energies = [log_energy_sphere(y)] if trace else None
    s_hist, y_hist = [], []
    it = 0
    for it in range(opts.max_iters):
        gnorm = float(np.max(np.linalg.norm(g, axis=1)))
        if gnorm <= opts.grad_tol:
            return _Run(y, it, gnorm, True, False, energies)
        if opts.lbfgs_memory and s_hist:
            d = tangent_project(y, _lbfgs_direction(g, s_hist, y_hist))
            slope = float(np.sum(g * d))
            if slope >= 0:
                d, s_hist, y_hist = -g, [], []
                slope = -float(np.sum(g * g))
            t = 1.0
        else:
            d = -g
            slope = -float(np.sum(g * g))
            t = step
        while True:
            new = _normalize(y + t * d)
            try:
                de = sphere_energy_change(y, new)
            except CoincidentPoints:
                de = math.inf
            if de <= opts.armijo_c * t * slope:
                break
            t *= opts.shrink
            if t < MIN_STEP:
                return _Run(y, it, gnorm, False, it == 0, energies)
        g_new = _tangent_grad(new)
        if opts.lbfgs_memory:
            sv = (new - y).ravel()
            yv = (g_new - tangent_project(new, g)).ravel()
            if np.dot(sv, yv) > 1e-16 * np.dot(yv, yv):
                s_hist.append(sv)
                y_hist.append(yv)
                if len(s_hist) > opts.lbfgs_memory:
                    s_hist.pop(0)
                    y_hist.pop(0)
        y, g = new, g_new
        step = t / opts.shrink
        if trace:
            energies.append(energies[-1] + de)
    gnorm = float(np.max(np.linalg.norm(g, axis=1)))
    return _Run(y, opts.max_iters, gnorm, gnorm <= opts.grad_tol, False, energies)


def _restart(args):
    n, opts, r = args
    rng = np.random.default_rng([opts.seed, r])
    y0 = initial_configuration(n, opts.init, rng, r)
    return descend(y0, opts)


def canonical_rotation(y):
    """Rotate so point 0 is the north pole and point 1 has zero azimuth."""
    y = np.asarray(y, dtype=float)
    p = y[0]
    north = np.array([0.0, 0.0, 1.0])
    v = np.cross(p, north)
    c = float(np.dot(p, north))
    if c < -1.0 + 1e-15:
        rot = np.diag([1.0, -1.0, -1.0])
    else:
        vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
        rot = np.eye(3) + vx + vx @ vx / (1.0 + c)
    z = y @ rot.T
    if y.shape[0] > 1:
        a = -math.atan2(z[1, 1], z[1, 0])
        rz = np.array([[math.cos(a), -math.sin(a), 0], [math.sin(a), math.cos(a), 0], [0, 0, 1]])
        z = z @ rz.T
    return z


def min_separation(y):
    iu, ju = _pairs(y.shape[0])
    return float(np.min(np.linalg.norm(y[iu] - y[ju], axis=1)))


def _workers(opts):
    if opts.workers is not None:
        return max(1, opts.workers)
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def minimize_log_energy(n, opts=None):
    """Best local minimizer of the sphere log energy over ``opts.restarts`` starts.

    Raises
    ------
    NoProgress
        If the line search stalls immediately on every restart.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    opts = MinimizeOptions() if opts is None else opts
    jobs = [(n, opts, r) for r in range(opts.restarts)]
    workers = min(_workers(opts), opts.restarts)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            runs = list(ex.map(_restart, jobs))
    else:
        runs = [_restart(j) for j in jobs]

    good = [run for run in runs if not run.stalled_at_start]
    if not good:
        raise NoProgress(f"line search stalled on all {len(runs)} restarts (n={n})")
    energies = [log_energy_sphere(run.y) for run in runs]
    scored = [(e, run) for e, run in zip(energies, runs) if not run.stalled_at_start]
    e_min = min(e for e, _ in scored)
    tied = [(e, run) for e, run in scored if e <= e_min + TIE_TOL]
    e_best, best = min(tied, key=lambda er: tuple(canonical_rotation(er[1].y).ravel()))
    return MinimizeResult(
        best=best.y,
        energy=e_best,
        grad_norm=best.grad_norm,
        iterations=best.iterations,
        restarts_used=len(runs),
        converged=best.converged,
        min_separation=min_separation(best.y),
        restart_energies=tuple(energies),
    )


def separation_check(res, c=1.0):
    """True iff the minimal distance exceeds ``c / sqrt(n - 1)``.

    Minimizers are known to be separated at this scale for *some* constant;
    ``c = 1`` is a heuristic default, and a failure is logged, not raised.
    """
    n = res.best.shape[0]
    ok = res.min_separation > c / math.sqrt(n - 1)
    if not ok:
        logger.warning(
            "n=%d: min separation %.6g below %.6g/sqrt(n-1)", n, res.min_separation, c
        )
    return ok


def sweep(n_list, opts=None):
    """Minimize for every n; failures are recorded as the NoProgress instance."""
    opts = MinimizeOptions() if opts is None else opts
    out = {}
    for n in n_list:
        try:
            out[n] = minimize_log_energy(n, opts)
        except NoProgress as exc:
            logger.warning("%s", exc)
            out[n] = exc
    return out


def energy_table(n_list, opts=None):
    """``[(n, best energy)]``; NaN where the optimizer made no progress."""
    results = sweep(n_list, opts)
    return [
        (n, r.energy if isinstance(r, MinimizeResult) else math.nan) for n, r in results.items()
    ]


def with_seed(opts, seed):
    return replace(opts, seed=seed)
