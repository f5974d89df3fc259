import math

import numpy as np
import pytest

from logsphere.errors import UnsupportedPotential
from logsphere.geometry import MobiusMap
from logsphere.lattice import paper_constants
from logsphere.potential import (
    PotentialHandle,
    alpha_v,
    canonical_density,
    canonical_equilibrium,
    canonical_potential,
    equilibrium,
    quadrature_entropy_integral,
    quadrature_i_v,
    quadrature_i_v_double,
    quadrature_log_moment,
    quadrature_normalization,
    quadrature_u_mu_2d,
    quadrature_u_mu_radial,
    transform_potential,
    u_mu,
    zeta,
)


def test_canonical_closed_forms():
    eq = canonical_equilibrium()
    assert eq.i_v == 0.5 and eq.c_v == 0.0 and eq.log_moment == 1.0
    assert eq.entropy_integral == pytest.approx(-3.14473, abs=1e-5)
    assert eq.c_v == pytest.approx(eq.i_v - 0.5 * eq.log_moment)
    assert eq.support == "whole_plane"


def test_quadrature_oracles():
    eq = canonical_equilibrium()
    assert quadrature_normalization() == pytest.approx(1.0, abs=1e-10)
    assert quadrature_log_moment() == pytest.approx(eq.log_moment, abs=1e-10)
    assert quadrature_entropy_integral() == pytest.approx(eq.entropy_integral, abs=1e-10)
    assert quadrature_i_v() == pytest.approx(eq.i_v, abs=1e-8)


@pytest.mark.slow
def test_double_quadrature_i_v():
    assert quadrature_i_v_double() == pytest.approx(0.5, abs=1e-4)


def test_u_mu():
    assert u_mu(np.array([0.0, 0.0])) == 0.0
    assert u_mu(np.array([1.0, 0.0])) == pytest.approx(-0.5 * math.log(2), rel=1e-15)
    for s in (0.0, 0.5, 1.0, 3.0):
        assert quadrature_u_mu_radial(s) == pytest.approx(-0.5 * math.log1p(s * s), abs=1e-9)
    assert quadrature_u_mu_2d(np.array([1.0, 0.0])) == pytest.approx(-0.5 * math.log(2), abs=1e-4)


def test_zeta_vanishes(rng):
    assert zeta(np.array([0.0, 0.0])) == 0.0
    assert zeta(np.array([100.0, -7.0])) == 0.0
    assert np.all(zeta(rng.standard_normal((20, 2)) * 10) == 0.0)


def test_zeta_definition(rng):
    x = rng.standard_normal((20, 2)) * 3
    eq = canonical_equilibrium()
    np.testing.assert_allclose(u_mu(x) + 0.5 * canonical_potential(x) - eq.c_v, 0.0, atol=1e-15)


def test_alpha_v():
    eq = canonical_equilibrium()
    c = paper_constants()
    a = alpha_v(eq, c.w_tri_density1)
    expected = c.w_tri_density1 / math.pi + 0.5 * math.log(math.pi) + 1
    assert a == pytest.approx(expected, abs=1e-14)
    assert a == pytest.approx(0.251247, abs=1e-6)
    # alpha - log moment + log 2 closes the chain to the sphere constant
    assert a - eq.log_moment + math.log(2) == pytest.approx(c.c_bhs, abs=1e-12)
    assert alpha_v(eq, 0.0) == -0.5 * eq.entropy_integral


def test_transform_identity_and_inversion(rng):
    x = rng.standard_normal((50, 2)) * 4
    v_id = transform_potential(MobiusMap.identity(), canonical_potential)
    np.testing.assert_allclose(v_id(x), canonical_potential(x), rtol=1e-14)
    v_inv = transform_potential(MobiusMap.inversion(), canonical_potential)
    np.testing.assert_allclose(v_inv(x), canonical_potential(x), rtol=1e-12, atol=1e-14)
    # value at the pole is the liminf
    assert v_inv(np.array([0.0, 0.0])) == pytest.approx(0.0, abs=1e-15)


def test_transform_custom_growth():
    quad = PotentialHandle.custom(lambda x: 2 * np.log1p(np.sum(x * x, axis=-1)))
    phi = MobiusMap(1, 0, 1, 1)
    v = transform_potential(phi, quad)
    x = np.array([[0.5, 0.2], [3.0, -1.0]])
    y = phi(x)
    expected = quad(y) - np.log1p(np.sum(y * y, axis=-1)) + np.log1p(np.sum(x * x, axis=-1))
    np.testing.assert_allclose(v(x), expected, rtol=1e-13)
    assert np.isfinite(v(np.array([-1.0, 0.0])))
    with pytest.raises(UnsupportedPotential):
        equilibrium(quad)


def test_mobius_equilibrium_density(rng):
    phi = MobiusMap.random_rotation(rng)
    eq = equilibrium(transform_potential(phi, canonical_potential))
    x = rng.standard_normal((30, 2))
    np.testing.assert_allclose(eq.density(x), canonical_density(x), rtol=1e-10)
    assert eq.i_v == 0.5
