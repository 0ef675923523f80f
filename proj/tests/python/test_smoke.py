"""Smoke tests for the python bindings."""

import math

import pytest

import fracgibc as fg


@pytest.fixture(scope="module")
def radial_problem():
    outer = fg.Curve.circle(0.0, 0.0, 1.0)
    inner = fg.Curve.circle(0.0, 0.0, 0.5)
    return fg.Problem(outer, inner, 0.1, [1.0], [1.0])


def test_caputo_symbol():
    assert fg.caputo_symbol(4.0, 0.5) == pytest.approx(2.0)
    v = fg.caputo_symbol(1.0 + 1.0j, 0.5)
    assert abs(v) == pytest.approx(2.0 ** 0.25)


def test_l1_weights_telescope():
    w = fg.l1_weights(0.5, 16)
    assert w[0] == 1.0
    assert sum(w) == pytest.approx(4.0)
    assert all(a > b for a, b in zip(w, w[1:]))


def test_curve_lengths():
    circle = fg.Curve.circle(0.0, 0.0, 1.0)
    assert circle.length() == pytest.approx(2.0 * math.pi, rel=1e-10)
    ellipse = fg.Curve.ellipse(0.0, 0.0, 0.5, 0.3)
    assert ellipse.length() == pytest.approx(2.5526998863398128, rel=1e-9)


def test_mesh_area_and_separation(radial_problem):
    assert radial_problem.area == pytest.approx(3.0 * math.pi / 4.0, rel=0.02)
    outer = fg.Curve.circle(0.0, 0.0, 1.0)
    inner = fg.Curve.circle(0.0, 0.0, 0.5)
    mesh = fg.build_annulus_mesh(outer, inner, 0.1)
    assert fg.separation(mesh) == pytest.approx(0.5, rel=0.02)
    assert mesh.mesh_size() <= 0.1


def test_signal_transform():
    assert fg.signal_transform(1, 1.0, 1.0 + 0.0j) == pytest.approx(0.25)


def test_freq_solve_radial_trace_constant(radial_problem):
    out = radial_problem.solve_freq(1.0 + 0.0j, alpha=0.5)
    values = [v.real for v in out["trace_values"]]
    assert max(values) - min(values) < 1e-8 * abs(max(values))
    assert out["residual"] <= 1e-10


def test_recovery_round_trip(radial_problem):
    out = radial_problem.recover(n_flux=8, s=1.0, alpha=0.5, m_eta=1, m_gamma=1)
    assert out["eta_coeffs"][0] == pytest.approx(1.0, abs=1e-5)
    assert out["gamma_coeffs"][0] == pytest.approx(1.0, abs=1e-5)
    assert not out["rank_deficient"]


def test_density_residuals_non_increasing():
    outer = fg.Curve.circle(0.0, 0.0, 1.0)
    inner = fg.Curve.ellipse(0.0, 0.0, 0.5, 0.3)
    prob = fg.Problem(outer, inner, 0.15, [1.0], [1.0])
    out = prob.density([2, 4, 8])
    res = out["residuals"]
    assert all(b <= a + 1e-12 for a, b in zip(res, res[1:]))


def test_invalid_inputs_raise():
    with pytest.raises(ValueError):
        fg.Curve.circle(0.0, 0.0, -1.0)
    with pytest.raises(ValueError):
        fg.l1_weights(1.5, 4)
