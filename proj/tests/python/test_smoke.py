import math

import numpy as np
import pytest

import wwlab


@pytest.fixture(scope="module")
def setting():
    grid = wwlab.Grid(128.0, 256)
    return wwlab.DirichletNeumann(grid, 1.0), wwlab.Params.from_beta(0.1, 0.4)


def test_flat_symbol():
    grid = wwlab.Grid(2 * math.pi, 32)
    dn = wwlab.DirichletNeumann(grid, 1.0)
    x = grid.nodes()
    psi = np.cos(3 * x)
    out = dn.apply(np.zeros_like(x), psi)
    assert np.max(np.abs(out - 3 * math.tanh(3.0) * psi)) < 1e-12


def test_dn_check(setting):
    dn, p = setting
    wave = wwlab.solitary_wave(dn, p, 0.1)
    r = wwlab.dn_check(dn, wave["eta"], pairs=5, seed=4)
    assert r["flat_symbol_error"] < 1e-8
    assert r["constant_error"] < 1e-12
    assert r["shape_order"] > 1.9


def test_solitary_wave(setting):
    dn, p = setting
    wave = wwlab.solitary_wave(dn, p, 0.1)
    assert wave["residual"] < 1e-9
    assert wave["c"] == pytest.approx(1 / math.sqrt(1.01), rel=1e-12)
    assert wave["eta"].min() < 0
    assert len(wave["x"]) == 256


def test_short_evolution(setting):
    dn, p = setting
    r = wwlab.evolve_solitary(dn, p, 0.1, T=1.0, dt=0.05, filter_strength=0.0)
    e = np.asarray(r["energy"])
    assert abs(e[-1] - e[0]) < 1e-9 * abs(e[0])
    assert r["shape_error"] < 1e-6


def test_momentum_slope(setting):
    dn, p = setting
    assert wwlab.grillakis_sign(dn, p, 0.1) < 0


def test_interaction_origin():
    lhs, rhs = wwlab.interaction_integral(1.0, 0.5, 0.9, 1.0, 0.0, 0.0)
    assert lhs == pytest.approx(1.0, rel=1e-14)
    assert rhs == pytest.approx(1.0, rel=1e-14)


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        wwlab.Grid(-1.0, 32)
    with pytest.raises(ValueError):
        wwlab.Grid(1.0, 33)
