"""Direction set, matrix decomposition, and stationary-flow checks.

Frozen literals come from tools/oracles/oracle_geometry.py and
tools/oracles/oracle_mikado.py (exact arithmetic).
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mhdlab.fields import Grid
from mhdlab.geometry import (
    GeometricDecomposition,
    build_direction_set,
    decompose_symmetric,
    pair_coefficients,
    reconstruct_symmetric,
    stationary_flow,
    verify_mikado_identity,
)


def test_direction_set_contents():
    d = build_direction_set()
    assert d.names == ("e1", "e2", "p", "q")
    assert d.num.tolist() == [[5, 0], [0, 5], [3, 4], [3, -4]]
    # k_perp is the quarter turn (-k2, k1)
    assert np.allclose(d.k_perp, [[0, 1], [-1, 0], [-0.8, 0.6], [0.8, 0.6]])
    for p in range(4):
        assert np.dot(d.k[p], d.k_perp[p]) == pytest.approx(0.0, abs=1e-16)
        assert np.linalg.norm(d.k[p]) == pytest.approx(1.0, abs=1e-15)


def test_carrier_integrality():
    d = build_direction_set()
    assert d.carrier(2, 5).tolist() == [3, 4]
    assert d.carrier(0, 20).tolist() == [20, 0]
    with pytest.raises(ValueError):
        d.carrier(2, 7)


def test_pair_coefficients_at_identity():
    vals = pair_coefficients(1.0, 0.0, 1.0)
    # beta, alpha, gamma_plus, gamma_minus at Id: 41/50, 17/25, 1/4, 1/4
    assert vals[0] == pytest.approx(41.0 / 50.0, abs=1e-15)
    assert vals[1] == pytest.approx(17.0 / 25.0, abs=1e-15)
    assert vals[2] == pytest.approx(0.25, abs=1e-15)
    assert vals[3] == pytest.approx(0.25, abs=1e-15)


def test_per_direction_values_at_identity():
    vals = decompose_symmetric(np.array([1.0, 0.0, 1.0]))
    assert vals[0] == pytest.approx(41.0 / 100.0, abs=1e-15)
    assert vals[1] == pytest.approx(17.0 / 50.0, abs=1e-15)
    assert vals[2] == pytest.approx(1.0 / 8.0, abs=1e-15)
    assert vals[3] == pytest.approx(1.0 / 8.0, abs=1e-15)


def test_decomposition_sample_point():
    vals = decompose_symmetric(np.array([1.0004, -3e-4, 0.9998]))
    assert vals[0] == pytest.approx(4099.0 / 10000.0, rel=1e-14)
    assert vals[1] == pytest.approx(1701.0 / 5000.0, rel=1e-14)
    assert vals[2] == pytest.approx(801.0 / 6400.0, rel=1e-14)
    assert vals[3] == pytest.approx(799.0 / 6400.0, rel=1e-14)


def test_amplitude_gradients_at_identity():
    g = GeometricDecomposition()
    eps = 1e-7
    base = np.array([1.0, 0.0, 1.0])

    def grad(pair):
        out = []
        for i in range(3):
            up, dn = base.copy(), base.copy()
            up[i] += eps
            dn[i] -= eps
            out.append((g.amplitudes(up)[pair] - g.amplitudes(dn)[pair])
                       / (2.0 * eps))
        return np.array(out)

    assert np.allclose(grad(1), [5.0 * np.sqrt(34.0) / 68.0, 0.0, 0.0],
                       atol=1e-8)
    assert np.allclose(grad(0), [0.0, 0.0, 5.0 * np.sqrt(41.0) / 82.0],
                       atol=1e-8)
    assert np.allclose(grad(2), [0.0, -25.0 * np.sqrt(2.0) / 48.0, 0.0],
                       atol=1e-8)
    assert np.allclose(grad(3), [0.0, 25.0 * np.sqrt(2.0) / 48.0, 0.0],
                       atol=1e-8)


def test_ball_positivity_margins():
    # worst-case pair values on the 1e-3 ball: 679/1000 (alpha),
    # 819/1000 (beta), 239/960 (both slants); per-direction is half
    s = 1e-3
    worst = [
        decompose_symmetric(np.array([1.0 - s, s, 1.0 - s])),
        decompose_symmetric(np.array([1.0 - s, -s, 1.0 - s])),
    ]
    mins = np.minimum(worst[0], worst[1])
    assert mins[0] == pytest.approx(0.5 * 819.0 / 1000.0, rel=1e-12)
    assert mins[1] == pytest.approx(0.5 * 679.0 / 1000.0, rel=1e-12)
    assert mins[2] == pytest.approx(0.5 * 239.0 / 960.0, rel=1e-12)
    assert mins[3] == pytest.approx(0.5 * 239.0 / 960.0, rel=1e-12)


def test_positivity_validation_names_pair():
    bad = np.array([1.0, 0.3, 1.0])  # r12 far past the gamma_plus root
    with pytest.raises(ValueError, match="'p'"):
        decompose_symmetric(bad)


@settings(max_examples=200, deadline=None)
@given(
    d11=st.floats(-1e-3, 1e-3), d12=st.floats(-1e-3, 1e-3),
    d22=st.floats(-1e-3, 1e-3))
def test_reconstruction_roundtrip(d11, d12, d22):
    r = np.array([1.0 + d11, d12, 1.0 + d22])
    vals = decompose_symmetric(r)
    back = reconstruct_symmetric(vals)
    assert np.max(np.abs(back - r)) < 1e-14
    assert np.all(vals > 0.0)


@settings(max_examples=50, deadline=None)
@given(
    st.floats(-5.0, 5.0), st.floats(-5.0, 5.0), st.floats(-5.0, 5.0))
def test_reconstruction_is_affine_everywhere(d11, d12, d22):
    # the reconstruction identity is affine and holds for any symmetric
    # input; only positivity is restricted to the ball
    r = np.array([d11, d12, d22])
    vals = decompose_symmetric(r, validate=False)
    assert np.max(np.abs(reconstruct_symmetric(vals) - r)) < 1e-12


def test_decompose_on_fields():
    grid = Grid(32)
    r = np.stack([1.0 + 1e-4 * np.cos(grid.x1),
                  1e-4 * np.sin(grid.x2),
                  1.0 - 1e-4 * np.cos(grid.x2)])
    vals = decompose_symmetric(r)
    assert vals.shape == (4, 32, 32)
    assert np.max(np.abs(reconstruct_symmetric(vals) - r)) < 1e-14


def test_in_ball_gate():
    g = GeometricDecomposition()
    assert g.in_ball(np.array([1.0005, -0.0005, 0.9995]))
    assert not g.in_ball(np.array([1.002, 0.0, 1.0]))


def test_stationary_flow_frozen_point_values():
    # b = (3/10, -1/5, 1/2, 1/7), lam = 5, at the grid point
    # (pi/4, -5 pi/8): values from tools/oracles/oracle_mikado.py
    grid = Grid(64)
    b = np.array([0.3, -0.2, 0.5, 1.0 / 7.0])
    w, s, p = stationary_flow(grid, b, 5)
    i, j = 40, 12
    assert grid.x1[i, j] == pytest.approx(np.pi / 4.0, abs=1e-15)
    assert grid.x2[i, j] == pytest.approx(-5.0 * np.pi / 8.0, abs=1e-15)
    assert w[0][i, j] == pytest.approx(5.742364591315559e-01, abs=1e-14)
    assert w[1][i, j] == pytest.approx(1.212183053462653e-01, abs=1e-14)
    assert s[i, j] == pytest.approx(4.503640165686916e-01, abs=1e-14)
    assert p[i, j] == pytest.approx(-5.271817585471862e-01, abs=1e-14)


def test_stationary_flow_identity_residuals():
    grid = Grid(128)
    b = np.array([0.3, -0.2, 0.5, 1.0 / 7.0])
    res = verify_mikado_identity(grid, b, 10)
    assert res["div_w"] < 1e-12
    assert res["momentum"] < 1e-12
    assert abs(res["pressure_mean"]) < 1e-14


def test_stationary_flow_single_pair_degenerate():
    grid = Grid(64)
    w, _, p = stationary_flow(grid, np.array([0.0, 0.0, 0.7, 0.0]), 5)
    assert np.max(np.abs(p)) < 1e-14
    res = verify_mikado_identity(grid, np.array([0.0, 0.0, 0.7, 0.0]), 5)
    assert res["momentum"] < 1e-13


def test_stationary_flow_grid_guard():
    grid = Grid(32)
    with pytest.raises(ValueError):
        verify_mikado_identity(grid, np.array([0.1, 0.0, 0.0, 0.0]), 10)
