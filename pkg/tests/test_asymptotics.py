import math

import numpy as np
import pytest

from oracles import KNOWN_MINIMA, icosahedron, octahedron
from logsphere.asymptotics import (
    LEADING,
    ExpansionResidual,
    expansion_report,
    fit_constant,
    lower_bound_c,
    planar_pullback,
    residual,
    residuals,
)
from logsphere.errors import InsufficientData
from logsphere.lattice import paper_constants


def synthetic(ns, c, amp=0.0, p=0.5):
    return [(n, (c + amp * n**-p) * n + LEADING * n * n - 0.5 * n * math.log(n)) for n in ns]


def test_residual_examples():
    (r2,) = residuals([(2, -2 * math.log(2))])
    assert r2.r_n == pytest.approx((3 * math.log(2) - 2) / 2, abs=1e-15)
    assert r2.r_n == pytest.approx(0.03972, abs=1e-5)
    n = 37
    e = LEADING * n * n - 0.5 * n * math.log(n)
    assert residual(n, e) == pytest.approx(0.0, abs=1e-12)
    assert residual(n, e + 0.25 * n) == pytest.approx(0.25, abs=1e-12)


def test_reconstruct_round_trip():
    for n, e in KNOWN_MINIMA.items():
        (r,) = residuals([(n, e)])
        assert r.reconstruct() == pytest.approx(e, rel=1e-14)
    with pytest.raises(ValueError):
        residuals([(1, 0.0)])
    with pytest.raises(ValueError):
        residuals([(5, math.nan)])


def test_power_law_recovers_planted_constant():
    ns = [16, 32, 64, 128, 256, 512, 1024, 2048, 4096]
    fit = fit_constant(residuals(synthetic(ns, -0.0556, 0.3, 0.5)), model="power")
    assert fit.c_hat == pytest.approx(-0.0556, abs=1e-3)
    assert fit.exponent == 0.5 and fit.amp == pytest.approx(0.3, abs=1e-6)
    assert fit.within_bounds
    fit1 = fit_constant(residuals(synthetic(ns, -0.1, -0.7, 1.0)), model="power")
    assert fit1.exponent == 1.0 and fit1.c_hat == pytest.approx(-0.1, abs=1e-9)


def test_plain_mean_is_exact_on_constants():
    ns = [10, 20, 30, 40, 50]
    fit = fit_constant([ExpansionResidual(n, 0.0, 0.1) for n in ns], model="mean")
    assert fit.c_hat == pytest.approx(0.1, abs=1e-15)
    assert fit.residual_norm == pytest.approx(0.0, abs=1e-15)


def test_fit_guards_and_bounds():
    with pytest.raises(InsufficientData):
        fit_constant(residuals(synthetic([10, 20, 30], 0.0)))
    with pytest.raises(InsufficientData):
        fit_constant(residuals(synthetic([10, 12, 14, 16, 20], 0.0)))
    with pytest.raises(ValueError):
        fit_constant(residuals(synthetic([10, 20, 40, 80], 0.0)), model="cubic")
    c = paper_constants()
    lo = lower_bound_c(c)
    assert lo == pytest.approx(-0.2255, abs=1e-4)
    res = residuals(synthetic([10, 20, 40, 80], c.c_bhs + 0.08))
    assert not fit_constant(res, model="mean").within_bounds
    assert fit_constant(res, model="mean", slack=(0.05, 0.10)).within_bounds


def test_report_on_exact_minima():
    table = sorted(KNOWN_MINIMA.items())
    configs = {6: octahedron(), 12: icosahedron()}
    rep = expansion_report(table, model="mean", configs=configs)
    assert rep["n_range"] == [2, 12]
    assert rep["gap"] == pytest.approx(rep["c_hat"] - rep["conjectural_c"], abs=1e-15)
    rows = {row["n"]: row for row in rep["residuals"]}
    assert rows[2]["r_n"] == pytest.approx((3 * math.log(2) - 2) / 2, abs=1e-15)
    assert "renormalized_per_point" in rows[12] and "renormalized_per_point" not in rows[2]
    assert set(rep["constants"]) >= {"c_bhs", "rsz_minw_lower"}


def test_pullback_avoids_north_and_preserves_energy():
    from logsphere.energy import hamiltonian_wbar, log_energy_sphere

    y = octahedron()
    x = planar_pullback(y)
    assert np.all(np.isfinite(x))
    n = len(y)
    assert hamiltonian_wbar(x) - n * (n - 1) * math.log(2) == pytest.approx(log_energy_sphere(y), abs=1e-10)
