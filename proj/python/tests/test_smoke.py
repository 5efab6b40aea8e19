"""Smoke tests for the python bindings: load a scenario, run a short closed
loop, and exercise the exposed numeric operations."""

import math
import os

import numpy as np
import pytest

import dockmpc

SCENARIO_DIR = os.environ.get("DOCKMPC_SCENARIO_DIR", "scenarios")


def scenario_path(name):
    return os.path.join(SCENARIO_DIR, name)


def test_load_scenario():
    sc = dockmpc.load_scenario(scenario_path("equilibrium_hold.ini"))
    assert sc.name == "equilibrium_hold"
    assert sc.mode == "standard"
    assert sc.rho_d == pytest.approx(12.0)


def test_equilibrium_hold_run():
    sc = dockmpc.load_scenario(scenario_path("equilibrium_hold.ini"))
    sc.duration = 2.0
    res = dockmpc.run(sc)
    assert res["t"].shape == (20,)
    assert res["x_p"].shape == (20, 6)
    assert np.max(np.abs(res["u_p"])) < 1e-6
    assert np.max(np.abs(res["u_a"])) < 1e-6
    assert res["metrics"]["min_rho"] == pytest.approx(12.0, abs=1e-6)


def test_run_is_deterministic():
    sc = dockmpc.load_scenario(scenario_path("case1.ini"))
    sc.duration = 1.0
    a = dockmpc.run(sc)
    b = dockmpc.run(sc)
    assert np.array_equal(a["x_p"], b["x_p"])
    assert np.array_equal(a["u_a"], b["u_a"])


def test_expm_identity():
    got = dockmpc.expm(np.zeros((4, 4)))
    assert np.allclose(got, np.eye(4), atol=1e-15)


def test_discretize_double_integrator():
    Ac = np.array([[0.0, 1.0], [0.0, 0.0]])
    Bc = np.array([[0.0], [1.0]])
    Ad, Bd = dockmpc.discretize(Ac, Bc, 0.5)
    assert np.allclose(Ad, [[1.0, 0.5], [0.0, 1.0]], atol=1e-14)
    assert np.allclose(Bd, [[0.125], [0.5]], atol=1e-14)


def test_solve_qp_unconstrained():
    H = 2.0 * np.eye(2)
    f = np.array([-2.0, -2.0])
    out = dockmpc.solve_qp(H, f)
    assert out["status"] == "optimal"
    assert np.allclose(out["z"], [1.0, 1.0], atol=1e-9)


def test_solve_qp_active_constraint():
    H = 2.0 * np.eye(2)
    f = np.array([-2.0, -2.0])
    G = np.array([[1.0, 0.0]])
    g = np.array([0.5])
    out = dockmpc.solve_qp(H, f, G, g, [False])
    assert out["status"] == "optimal"
    assert np.allclose(out["z"], [0.5, 1.0], atol=1e-9)
    assert out["active_set"] == [0]
