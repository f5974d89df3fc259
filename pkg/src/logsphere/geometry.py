"""Stereographic and Mobius transport between the plane and the sphere.

The inverse stereographic projection of the literature sends the plane to
the sphere of radius 1/2 centred at (0, 0, 1/2), with the origin going to
the south pole (0, 0, 0) and infinity to N = (0, 0, 1).  All public sphere
coordinates here live on the origin-centred *unit* sphere instead; the two
are related by ``y = 2 T(x) - (0, 0, 1)``.  Since the map doubles every
distance, an energy of ``k`` ordered pairs picks up ``-k log 2`` on the
unit sphere.

Points are plain numpy arrays: shape ``(2,)`` or ``(n, 2)`` in the plane,
``(3,)`` or ``(n, 3)`` on the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NorthPoleNotRepresentable, PoleOfMap

NORTH = np.array([0.0, 0.0, 1.0])

POLE_TOL = 1e-14
NORTH_TOL = 1e-12


def _as_points(x, dim):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != dim:
        raise ValueError(f"expected trailing dimension {dim}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("coordinates must be finite")
    return x


def half_sphere_map(x):
    """The map T onto the radius-1/2 sphere centred at (0, 0, 1/2)."""
    x = _as_points(x, 2)
    r2 = np.sum(x * x, axis=-1)
    denom = 1.0 + r2
    return np.stack([x[..., 0] / denom, x[..., 1] / denom, r2 / denom], axis=-1)


def stereographic(x):
    """Inverse stereographic projection of planar points onto the unit sphere.

    Parameters
    ----------
    x : array_like, shape (2,) or (n, 2)

    Returns
    -------
    ndarray, shape (3,) or (n, 3)
        ``2 T(x) - N``; the origin goes to the south pole and ``|x| -> inf``
        approaches the north pole.
    """
    x = _as_points(x, 2)
    r2 = np.sum(x * x, axis=-1)
    denom = 1.0 + r2
    y = np.stack(
        [2.0 * x[..., 0] / denom, 2.0 * x[..., 1] / denom, (r2 - 1.0) / denom],
        axis=-1,
    )
    # exact formulas are already unit norm up to rounding; renormalize so the
    # invariant holds at 1e-12 even for huge |x|
    return y / np.linalg.norm(y, axis=-1, keepdims=True)


def inverse_stereographic(y):
    """Planar preimage of unit-sphere points. Raises at the north pole."""
    y = _as_points(y, 3)
    if np.any(np.linalg.norm(y - NORTH, axis=-1) < NORTH_TOL):
        raise NorthPoleNotRepresentable("the north pole has no planar preimage")
    denom = 1.0 - y[..., 2]
    return np.stack([y[..., 0] / denom, y[..., 1] / denom], axis=-1)


def chordal_distance(x, y):
    """Unit-sphere distance between the images of planar points x and y."""
    x = _as_points(x, 2)
    y = _as_points(y, 2)
    d = np.linalg.norm(x - y, axis=-1)
    return 2.0 * d / (np.sqrt(1.0 + np.sum(x * x, axis=-1)) * np.sqrt(1.0 + np.sum(y * y, axis=-1)))


def contains_north(cfg, tol=NORTH_TOL):
    """True if some point of a unit-sphere configuration is the north pole."""
    cfg = np.atleast_2d(_as_points(cfg, 3))
    return bool(np.any(np.linalg.norm(cfg - NORTH, axis=-1) < tol))


def _to_complex(x):
    return x[..., 0] + 1j * x[..., 1]


def _to_real(z):
    return np.stack([z.real, z.imag], axis=-1)


@dataclass(frozen=True)
class MobiusMap:
    """Fractional-linear map ``z -> (a z + b) / (c z + d)`` with ``ad - bc = 1``.

    The coefficients are rescaled on construction so the determinant is
    exactly one (up to rounding).  Maps with a unitary coefficient matrix
    are precisely the conjugates ``T^-1 R T`` of sphere rotations R.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(v) for v in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if abs(det) == 0.0:
            raise ValueError("singular Mobius coefficients")
        s = np.sqrt(det)
        for name, v in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, complex(v / s))

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def inversion(cls):
        """``z -> -1/z``, which swaps the two poles of the sphere."""
        return cls(0, -1, 1, 0)

    @classmethod
    def rotation(cls, alpha, beta):
        """Sphere rotation as the SU(2) matrix ``[[alpha, beta], [-conj(beta), conj(alpha)]]``."""
        alpha, beta = complex(alpha), complex(beta)
        norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        alpha, beta = alpha / norm, beta / norm
        return cls(alpha, beta, -beta.conjugate(), alpha.conjugate())

    @classmethod
    def random_rotation(cls, rng):
        q = rng.standard_normal(4)
        return cls.rotation(complex(q[0], q[1]), complex(q[2], q[3]))

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def pole(self):
        """The point ``-d/c`` sent to infinity, or None for affine maps."""
        if self.c == 0:
            return None
        z = -self.d / self.c
        return np.array([z.real, z.imag])

    def is_rotation(self, tol=1e-12):
        m = self.matrix
        return bool(np.allclose(m @ m.conj().T, np.eye(2), atol=tol))

    def compose(self, other):
        """The map ``self o other``."""
        m = self.matrix @ other.matrix
        return MobiusMap(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    __matmul__ = compose

    def inverse(self):
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def __call__(self, x):
        return mobius_apply(self, x)


def mobius_apply(phi, x):
    """Evaluate a Mobius map on planar points via the complex identification."""
    x = _as_points(x, 2)
    z = _to_complex(x)
    den = phi.c * z + phi.d
    if np.any(np.abs(den) < POLE_TOL):
        raise PoleOfMap("point lies on the pole of the Mobius map")
    return _to_real((phi.a * z + phi.b) / den)
