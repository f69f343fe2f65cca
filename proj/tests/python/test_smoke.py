import json
import math

import numpy as np
import pytest

import akmeter


@pytest.fixture(scope="module")
def grid():
    return akmeter.Grid(half_width=10.0, n=64, hbar=1.0)


def test_coherent_wigner_peak(grid):
    psi = akmeter.coherent_state(grid, mu_x=0.0, mu_p=0.0, lambda_=1.0)
    w = akmeter.wigner(grid, psi)
    assert abs(w.mass() - 1.0) < 1e-6
    assert abs(w.values.max() - 1.0 / math.pi) < 1e-4


def test_error_report_complete_optimal(grid):
    ap = akmeter.complete_optimal(1.0, 1.0, grid)
    rep = akmeter.error_report(ap)
    assert rep["dei_x"] == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-9)
    assert rep["dd_x"] * rep["dd_p"] == pytest.approx(1.0, abs=1e-6)


def test_outcome_distribution_is_husimi(grid):
    psi = akmeter.coherent_state(grid, 0.3, -0.2, 1.0)
    phi_f = akmeter.gaussian_packet(grid, 0.0, 1.0)
    ap = akmeter.retro_optimal(1.0, grid, phi_f)
    rho = akmeter.outcome_distribution(grid, psi, ap)
    q = akmeter.husimi(grid, psi, 1.0)
    assert akmeter.l1_distance(rho, q) < 1e-6
    assert rho.min_value() > -1e-9
    direct = akmeter.outcome_distribution(grid, psi, ap, route="direct")
    assert akmeter.l1_distance(rho, direct) < 1e-6


def test_pointer_bound_saturation(grid):
    psi = akmeter.coherent_state(grid, 0.0, 0.0, 1.0)
    ap = akmeter.complete_optimal(1.0, 1.0, grid)
    rho = akmeter.outcome_distribution(grid, psi, ap)
    dx, dp = akmeter.pointer_variances(rho)
    assert dx * dp == pytest.approx(1.0, abs=1e-4)


def test_sampling_deterministic(grid):
    psi = akmeter.coherent_state(grid, 0.0, 0.0, 1.0)
    ap = akmeter.complete_optimal(1.0, 1.0, grid)
    rho = akmeter.outcome_distribution(grid, psi, ap)
    a = akmeter.sample(rho, 500, seed=42)
    b = akmeter.sample(rho, 500, seed=42)
    assert np.array_equal(a, b)
    assert abs(a[:, 0].mean()) < 0.2


def test_run_scenario_text():
    text = """
[grid]
n = 128
[system]
type = coherent
mu_x = 0.0
mu_p = 0.0
lambda = 1.0
[apparatus]
type = min_disturb
lambda = 1.0
eta = 0.6931471805599453
"""
    report = json.loads(akmeter.run_scenario_text(text))
    assert report["errors"]["dd_x"] * report["errors"]["dd_p"] == pytest.approx(0.5, abs=1e-6)
    names = {v["name"]: v for v in report["verdicts"]}
    assert names["cosh_error_floor"]["pass"]
    assert all(v["pass"] for v in report["verdicts"])
