"""The canonical potential ``V(x) = log(1 + |x|^2)`` and its equilibrium data.

Transported to the sphere this potential is the zero external field, so its
equilibrium measure is the pull-back of the uniform surface measure:
``dmu_V = dx / (pi (1 + |x|^2)^2)``, supported on the whole plane.  Every
quantity the order-n constant needs has a closed form here; the quadrature
helpers recompute them independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import UnsupportedPotential
from .geometry import MobiusMap, mobius_apply

CANONICAL = "canonical"
MOBIUS = "mobius"
CUSTOM = "custom"


def _sq(x):
    x = np.asarray(x, dtype=float)
    return np.sum(x * x, axis=-1)


@dataclass(frozen=True)
class PotentialHandle:
    """A planar external field ``V``.

    ``kind`` is ``"canonical"``, ``"mobius"`` (then ``base`` and ``phi`` are
    set) or ``"custom"`` for an arbitrary callable, which can be evaluated
    and transported but has no equilibrium data.
    """

    kind: str
    evaluator: Callable = field(repr=False, compare=False)
    base: "PotentialHandle | None" = None
    phi: MobiusMap | None = None
    # liminf of V(x) - log(1 + |x|^2) as |x| -> inf, when known exactly
    growth_liminf: float | None = None

    def __call__(self, x):
        return self.evaluator(np.asarray(x, dtype=float))

    @classmethod
    def custom(cls, func, growth_liminf=None):
        return cls(CUSTOM, func, growth_liminf=growth_liminf)


def _canonical_eval(x):
    return np.log1p(_sq(x))


canonical_potential = PotentialHandle(CANONICAL, _canonical_eval, growth_liminf=0.0)


def _growth_liminf(V, radius=1e8, samples=256):
    if V.growth_liminf is not None:
        return V.growth_liminf
    theta = 2 * np.pi * np.arange(samples) / samples
    pts = radius * np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return float(np.min(V(pts) - np.log1p(radius**2)))


def transform_potential(phi, V):
    """Transport ``V`` through the Mobius map ``phi``.

    ``V_phi(x) = V(phi(x)) - log(1 + |phi(x)|^2) + log(1 + |x|^2)``; at the
    pole ``-d/c`` the value is the liminf, ``log(1 + |d/c|^2)`` plus the
    growth liminf of ``V`` at infinity.
    """
    pole = phi.pole
    at_pole = None
    if pole is not None:
        at_pole = math.log1p(float(pole @ pole)) + _growth_liminf(V)

    def evaluator(x):
        x = np.asarray(x, dtype=float)
        flat = np.atleast_2d(x)
        out = np.empty(flat.shape[0])
        if pole is None:
            mask = np.zeros(flat.shape[0], dtype=bool)
        else:
            mask = np.linalg.norm(flat - pole, axis=-1) < 1e-14
        ok = ~mask
        if np.any(ok):
            y = mobius_apply(phi, flat[ok])
            out[ok] = V(y) - np.log1p(_sq(y)) + np.log1p(_sq(flat[ok]))
        out[mask] = at_pole
        return out.reshape(x.shape[:-1])

    if phi.c == 0:
        growth = V.growth_liminf
    else:
        # |x| -> inf is sent to a/c, where V stays finite
        z = phi.a / phi.c
        ac = np.array([z.real, z.imag])
        growth = float(V(ac) - math.log1p(float(ac @ ac)))
    return PotentialHandle(MOBIUS, evaluator, base=V, phi=phi, growth_liminf=growth)


def _is_canonical_family(V):
    while V.kind == MOBIUS:
        V = V.base
    return V.kind == CANONICAL


def canonical_density(x):
    """Equilibrium density ``1 / (pi (1 + |x|^2)^2)`` of the canonical potential."""
    return 1.0 / (np.pi * (1.0 + _sq(x)) ** 2)


@dataclass(frozen=True)
class EquilibriumData:
    """Closed-form equilibrium data of a supported potential.

    ``log_moment`` is ``int log(1 + |x|^2) dmu_V`` and ``entropy_integral``
    is ``int m_V log m_V dx``.  ``c_v`` is the Robin constant
    ``I_V - int V/2 dmu_V``.
    """

    potential: PotentialHandle = field(repr=False)
    density: Callable = field(repr=False)
    support: str
    i_v: float
    c_v: float
    entropy_integral: float
    log_moment: float


def canonical_equilibrium():
    """Equilibrium data of ``V(x) = log(1 + |x|^2)``."""
    return EquilibriumData(
        potential=canonical_potential,
        density=canonical_density,
        support="whole_plane",
        i_v=0.5,
        c_v=0.0,
        entropy_integral=-(math.log(math.pi) + 2.0),
        log_moment=1.0,
    )


def mobius_density(phi, density):
    """Density law ``m_{V_phi}(x) = m_V(phi(x)) ((1+|phi(x)|^2)/(1+|x|^2))^2``."""

    def m(x):
        x = np.asarray(x, dtype=float)
        y = mobius_apply(phi, x)
        return density(y) * ((1.0 + _sq(y)) / (1.0 + _sq(x))) ** 2

    return m


def equilibrium(V):
    """Equilibrium data for the canonical potential or one of its Mobius images.

    A Mobius image ``V_phi`` of the canonical potential coincides with it
    pointwise, so the data are the canonical ones with the density given by
    the Mobius density law.
    """
    if V.kind == CANONICAL:
        return canonical_equilibrium()
    if V.kind == MOBIUS and _is_canonical_family(V):
        base = equilibrium(V.base)
        return EquilibriumData(
            potential=V,
            density=mobius_density(V.phi, base.density),
            support=base.support,
            i_v=base.i_v,
            c_v=base.c_v,
            entropy_integral=base.entropy_integral,
            log_moment=base.log_moment,
        )
    raise UnsupportedPotential(f"no equilibrium data for a {V.kind} potential")


def _require_canonical(eq):
    if not _is_canonical_family(eq.potential):
        raise UnsupportedPotential("closed form only for the canonical potential family")


def u_mu(x, eq=None):
    """Logarithmic potential of the canonical equilibrium measure, ``-1/2 log(1+|x|^2)``."""
    eq = canonical_equilibrium() if eq is None else eq
    _require_canonical(eq)
    return -0.5 * np.log1p(_sq(x))


def zeta(x, eq=None):
    """``U^mu_V + V/2 - c_V``; identically zero since the support is the whole plane."""
    eq = canonical_equilibrium() if eq is None else eq
    _require_canonical(eq)
    return np.zeros(np.shape(x)[:-1])


def alpha_v(eq, min_w1):
    """``min_w1 / pi - entropy_integral / 2`` for a caller-supplied ``min W`` at density one."""
    return min_w1 / math.pi - 0.5 * eq.entropy_integral


# --- independent quadrature -------------------------------------------------


def radial_integral(f, tol=1e-12):
    """``int_0^inf f(r) dr`` after the substitution ``r = tan(theta)``."""

    def g(theta):
        r = math.tan(theta)
        return f(r) / math.cos(theta) ** 2

    val, _ = integrate.quad(g, 0.0, math.pi / 2, epsabs=tol, epsrel=tol, limit=200)
    return val


def radial_measure_integral(h, density=None, tol=1e-12):
    """``int_{R^2} h(|x|) m(|x|) dx`` for a radial density (canonical by default)."""
    if density is None:

        def density(r):
            return 1.0 / (math.pi * (1.0 + r * r) ** 2)

    return radial_integral(lambda r: 2.0 * math.pi * r * h(r) * density(r), tol=tol)


def quadrature_normalization():
    return radial_measure_integral(lambda r: 1.0)


def quadrature_log_moment():
    return radial_measure_integral(lambda r: math.log1p(r * r))


def quadrature_entropy_integral():
    return radial_measure_integral(lambda r: -math.log(math.pi) - 2.0 * math.log1p(r * r))


def quadrature_u_mu_radial(s):
    """Logarithmic potential at radius ``s`` by the mean-value property.

    The circle average of ``-log|x - y|`` over ``|y| = r`` equals
    ``-log max(|x|, r)``, so only a radial integral remains.
    """
    t = math.atan(s)

    def g(theta):
        r = math.tan(theta)
        if r == 0.0:
            return 0.0
        return -math.log(max(s, r)) * 2 * r / (1 + r * r) ** 2 / math.cos(theta) ** 2

    # split at r = s so the kink does not cost accuracy
    a, _ = integrate.quad(g, 0.0, t, epsabs=1e-13, epsrel=1e-13, limit=200)
    b, _ = integrate.quad(g, t, math.pi / 2, epsabs=1e-13, epsrel=1e-13, limit=200)
    return a + b


def quadrature_u_mu_2d(x, radius_cut=math.pi / 2):
    """``-int log|x - y| m_V(y) dy`` by 2D quadrature in polar coordinates.

    Brute-force oracle (no symmetry used): the radius is mapped by
    ``r = tan(theta)`` and the log singularity is integrable.
    """
    x = np.asarray(x, dtype=float)

    def integrand(phi, theta):
        r = math.tan(theta)
        jac = 1.0 / math.cos(theta) ** 2
        y1, y2 = r * math.cos(phi), r * math.sin(phi)
        d = math.hypot(x[0] - y1, x[1] - y2)
        if d == 0.0:
            return 0.0
        return -math.log(d) * r / (math.pi * (1 + r * r) ** 2) * jac

    s = float(np.hypot(*x))
    t = math.atan(s)
    ang = math.atan2(x[1], x[0])
    total = 0.0
    # split at the singular radius and angle
    for lo, hi in ((0.0, t), (t, radius_cut)):
        if hi <= lo:
            continue
        for plo, phi_hi in ((ang - math.pi, ang), (ang, ang + math.pi)):
            v, _ = integrate.dblquad(
                integrand, lo, hi, plo, phi_hi, epsabs=1e-9, epsrel=1e-9
            )
            total += v
    return total


def quadrature_i_v():
    """``I_V(mu_V) = int (U^mu + V) dmu`` with ``U^mu`` from the radial quadrature."""
    return radial_measure_integral(lambda r: quadrature_u_mu_radial(r) + math.log1p(r * r), tol=1e-10)


def quadrature_i_v_double():
    """``I_V`` from the double-integral form, both inner and outer by quadrature.

    ``I_V = iint (-log|x-y| + V(x)/2 + V(y)/2) dmu dmu``; the log kernel is
    reduced with the circle-average identity and the rest integrated over
    the product of the radial measures.
    """

    def inner(theta_r, theta_s):
        r, s = math.tan(theta_r), math.tan(theta_s)
        w = (2 * r / (1 + r * r) ** 2) * (2 * s / (1 + s * s) ** 2)
        jac = 1.0 / (math.cos(theta_r) ** 2 * math.cos(theta_s) ** 2)
        k = -math.log(max(r, s)) + 0.5 * math.log1p(r * r) + 0.5 * math.log1p(s * s)
        return k * w * jac

    v, _ = integrate.dblquad(inner, 0.0, math.pi / 2, 0.0, math.pi / 2, epsabs=1e-10, epsrel=1e-10)
    return v
