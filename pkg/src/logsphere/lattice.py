"""Renormalized energy of Bravais lattices in closed form.

For a lattice of density ``1/(2 pi)`` whose shape is ``tau = a + ib`` in the
modular fundamental domain,

    W = -1/2 log( sqrt(2 pi b) |eta(tau)|^2 ),

with ``eta`` the Dedekind eta function.  Other densities follow from the
scaling law ``W_m = m (W_1 - (pi/2) log m)``.  At the hexagonal point the
Chowla-Selberg formula turns this into Gamma values, which yields the
constant C_BHS.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateBasis, DomainError

TAU_TRI = complex(0.5, math.sqrt(3.0) / 2.0)
TAU_SQUARE = 1j

# Lanczos coefficients for g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

ETA_EPS = 1e-18
ETA_MAX_TERMS = 200
FD_TOL = 1e-12


def gamma_fn(x):
    """Gamma function for ``x > 0`` by the Lanczos approximation (g=7, 9 terms)."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"gamma_fn needs x > 0, got {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def dedekind_eta(tau):
    """``eta(tau) = q^(1/24) prod_{n>=1} (1 - q^n)`` with ``q = exp(2 pi i tau)``.

    ``q^(1/24)`` is taken as ``exp(pi i tau / 12)``.  The product stops once
    ``|q|^N < 1e-18`` (at most 200 factors), which in the fundamental domain
    takes about a dozen factors.
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError("dedekind_eta needs Im(tau) > 0")
    q = cmath.exp(2j * math.pi * tau)
    aq = abs(q)
    prod = 1.0 + 0j
    qn = q
    mag = aq
    for _ in range(ETA_MAX_TERMS):
        prod *= 1.0 - qn
        if mag < ETA_EPS:
            break
        qn *= q
        mag *= aq
    return cmath.exp(1j * math.pi * tau / 12.0) * prod


def reduce_tau(tau):
    """Map ``tau`` into ``{0 <= Re tau <= 1/2, |tau| >= 1}``.

    Uses ``tau -> tau + k`` and ``tau -> -1/tau`` and finally the mirror
    ``tau -> -conj(tau)``.  Mirror images describe reflected lattices, which
    have the same energy, so shapes are canonical up to rotation and
    reflection.
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError("shape parameter needs Im(tau) > 0")
    for _ in range(10000):
        tau = complex(tau.real - round(tau.real), tau.imag)
        if abs(tau) < 1.0 - 1e-15:
            tau = -1.0 / tau
        else:
            break
    return complex(abs(tau.real), tau.imag)


@dataclass(frozen=True)
class BravaisLattice:
    u: tuple
    v: tuple

    def __post_init__(self):
        u = tuple(float(c) for c in self.u)
        v = tuple(float(c) for c in self.v)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        if abs(self.det) <= 1e-14:
            raise DegenerateBasis("basis vectors are linearly dependent")

    @property
    def det(self):
        return self.u[0] * self.v[1] - self.u[1] * self.v[0]

    @property
    def density(self):
        return 1.0 / abs(self.det)


@dataclass(frozen=True)
class LatticeShape:
    """Reduced modular parameter ``tau`` and point density ``m``."""

    tau: complex
    density: float = 1.0

    @classmethod
    def from_tau(cls, tau, density=1.0):
        if not density > 0:
            raise DomainError("density must be positive")
        return cls(reduce_tau(tau), float(density))

    def basis(self):
        """A basis ``(u, v)`` with ``v/u = tau`` and the requested density."""
        s = math.sqrt(1.0 / (self.density * self.tau.imag))
        return BravaisLattice((s, 0.0), (s * self.tau.real, s * self.tau.imag))


def square_lattice(m=1.0):
    s = 1.0 / math.sqrt(m)
    return BravaisLattice((s, 0.0), (0.0, s))


def triangular_lattice(m=1.0):
    """The triangular lattice of density ``m``, ``sqrt(2/(m sqrt 3)) (Z(1,0) + Z(1/2, sqrt3/2))``."""
    s = math.sqrt(2.0 / (m * math.sqrt(3.0)))
    return BravaisLattice((s, 0.0), (0.5 * s, s * math.sqrt(3.0) / 2.0))


def gauss_reduce(u, v):
    """Lagrange-Gauss reduction of a planar basis to a shortest basis."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u @ u > v @ v:
        u, v = v, u
    for _ in range(10000):
        mu = round(float(u @ v) / float(u @ u))
        v = v - mu * u
        if v @ v < u @ u * (1.0 - 1e-15):
            u, v = v, u
        else:
            return u, v
    raise RuntimeError("Gauss reduction did not terminate")


def reduce_lattice(lattice):
    """Shape ``(tau, density)`` of a lattice, invariant under change of basis."""
    if abs(lattice.det) <= 1e-14:
        raise DegenerateBasis("basis vectors are linearly dependent")
    u, v = gauss_reduce(lattice.u, lattice.v)
    tau = complex(v[0], v[1]) / complex(u[0], u[1])
    if tau.imag < 0:
        tau = tau.conjugate()
    return LatticeShape(reduce_tau(tau), lattice.density)


def w_density_2pi_inv(tau):
    """W of the lattice with shape ``tau`` at density ``1/(2 pi)``."""
    tau = reduce_tau(tau)
    b = tau.imag
    return -0.5 * math.log(math.sqrt(2.0 * math.pi * b) * abs(dedekind_eta(tau)) ** 2)


def w_density1(tau):
    """W at density one, ``2 pi W_{1/(2pi)} - (pi/2) log(2 pi)``."""
    return 2.0 * math.pi * w_density_2pi_inv(tau) - 0.5 * math.pi * math.log(2.0 * math.pi)


def scale_w(w1, m):
    """Scaling law ``W_m = m (W_1 - (pi/2) log m)``."""
    return m * (w1 - 0.5 * math.pi * math.log(m))


def w_lattice(shape):
    """Renormalized energy of a lattice shape at its own density."""
    if not complex(shape.tau).imag > 0:
        raise DomainError("shape needs Im(tau) > 0")
    return scale_w(w_density1(shape.tau), shape.density)


def height(tau):
    """``-log(Im(tau) |eta(tau)|^4)``, the flat-torus height up to a constant."""
    tau = reduce_tau(tau)
    return -math.log(tau.imag * abs(dedekind_eta(tau)) ** 4)


def chowla_selberg_value():
    """``Gamma(1/3)^6 sqrt(3) / (16 pi^4)``, the value of ``|eta(tau_tri)|^4``."""
    return gamma_fn(1.0 / 3.0) ** 6 * math.sqrt(3.0) / (16.0 * math.pi**4)


def chowla_selberg_check(tau=TAU_TRI):
    """``| |eta(tau)|^4 - Gamma(1/3)^6 sqrt3 / (16 pi^4) |``; tiny only at the hexagonal point."""
    return abs(abs(dedekind_eta(tau)) ** 4 - chowla_selberg_value())


def w_triangular_closed_form():
    """``pi log(2 sqrt2 pi / (sqrt3 Gamma(1/3)^3))``, W of the density-one triangular lattice."""
    g = gamma_fn(1.0 / 3.0)
    return math.pi * math.log(2.0 * math.sqrt(2.0) * math.pi / (math.sqrt(3.0) * g**3))


def c_bhs():
    """``2 log 2 + 1/2 log(2/3) + 3 log(sqrt(pi) / Gamma(1/3))``."""
    return (
        2.0 * math.log(2.0)
        + 0.5 * math.log(2.0 / 3.0)
        + 3.0 * math.log(math.sqrt(math.pi) / gamma_fn(1.0 / 3.0))
    )


@dataclass(frozen=True)
class PaperConstants:
    c_bhs: float
    w_tri_density1: float
    rsz_a: float
    rsz_b: float
    rsz_minw_lower: float
    rsz_c_lower: float

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def paper_constants():
    """C_BHS, W of the triangular lattice and the lower bounds on min W and C.

    The lower bounds come from the Rakhmanov-Saff-Zhou energy estimate with
    ``a = 2 sqrt(2pi)/sqrt27 (sqrt(2pi + sqrt27) + sqrt(2pi))`` and
    ``b = (sqrt(2pi + sqrt27) - sqrt(2pi)) / (sqrt(2pi + sqrt27) + sqrt(2pi))``.
    """
    s27 = math.sqrt(27.0)
    r = math.sqrt(2.0 * math.pi)
    rp = math.sqrt(2.0 * math.pi + s27)
    a = 2.0 * r / s27 * (rp + r)
    b = (rp - r) / (rp + r)
    tail = (1.0 - math.exp(-a)) ** b
    return PaperConstants(
        c_bhs=c_bhs(),
        w_tri_density1=w_lattice(reduce_lattice(triangular_lattice(1.0))),
        rsz_a=a,
        rsz_b=b,
        rsz_minw_lower=-0.5 * math.pi * math.log(2.0 * math.pi**2 * tail),
        rsz_c_lower=-0.5 * math.log(0.5 * math.pi * tail),
    )


def fundamental_domain_grid(grid_re=64, grid_im=64, im_max=3.0):
    """Grid of ``tau`` over ``|Re tau| <= 1/2, sqrt3/2 <= Im tau <= im_max``.

    Returns ``(taus, values)``, both ``(grid_im, grid_re)``; ``values`` holds
    W at density one and NaN where ``|tau| < 1``.
    """
    re = np.linspace(-0.5, 0.5, grid_re)
    im = np.linspace(math.sqrt(3.0) / 2.0, im_max, grid_im)
    taus = im[:, None] * 1j + re[None, :]
    values = np.full(taus.shape, np.nan)
    for i in range(grid_im):
        for j in range(grid_re):
            t = taus[i, j]
            if abs(t) >= 1.0 - FD_TOL:
                # W depends on |Re tau| only; evaluating there keeps the scan mirror-exact
                values[i, j] = w_density1(complex(abs(t.real), t.imag))
    return taus, values


class ScanResult(NamedTuple):
    tau: complex
    value: float
    margin: float


def minimality_scan(grid_re=64, grid_im=64, im_max=3.0):
    """Grid minimum of W at density one over the truncated fundamental domain.

    ``margin`` is the gap to the best grid node that is neither adjacent to
    the minimizer nor to its mirror image.  Ties go to the lowest row, then
    the lowest column; the reported ``tau`` is then mapped to ``Re >= 0``.
    """
    if grid_re < 32 or grid_im < 32:
        raise ValueError("grid must be at least 32 x 32")
    if im_max < 2:
        raise ValueError("im_max must be >= 2")
    taus, values = fundamental_domain_grid(grid_re, grid_im, im_max)
    masked = np.where(np.isnan(values), np.inf, values)
    flat = int(np.argmin(masked))
    i, j = divmod(flat, grid_re)
    best = float(masked[i, j])
    excl = np.zeros_like(masked, dtype=bool)
    for jj in (j, grid_re - 1 - j):
        excl[max(i - 1, 0) : i + 2, max(jj - 1, 0) : jj + 2] = True
    margin = float(np.min(np.where(excl, np.inf, masked)) - best)
    t = taus[i, j]
    return ScanResult(complex(abs(t.real), t.imag), best, margin)
