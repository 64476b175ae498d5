"""Shape, support, and quadrature checks for the 1D kernel toolbox."""

import numpy as np
import pytest

from mhdlab._kernels import (
    barycentric_coefficients,
    bump_banded_coefficients,
    chebyshev_nodes,
    gauss_legendre,
    gevrey_bump,
    gevrey_ramp,
    kaiser_coefficients,
    plateau_banded_coefficients,
    plateau_hard,
    space_kernel_profile,
    synthesize_even,
    time_kernel,
    time_kernel_derivative,
)


def test_gevrey_bump_peak_and_support():
    s = np.linspace(-2.0, 2.0, 4001)
    b = gevrey_bump(s)
    assert b[2000] == 1.0
    assert np.all(b[np.abs(s) >= 1.0] == 0.0)
    assert np.all(b >= 0.0)
    assert np.all(np.diff(b[(s >= 0) & (s <= 1)]) <= 0.0)


def test_gevrey_ramp_saturation_and_midpoint():
    assert gevrey_ramp(np.array([-1.0, 0.0])).tolist() == [0.0, 0.0]
    assert gevrey_ramp(np.array([1.0, 2.0])).tolist() == [1.0, 1.0]
    assert gevrey_ramp(np.array([0.5]))[0] == pytest.approx(0.5, abs=1e-15)
    u = np.linspace(-0.5, 1.5, 2001)
    assert np.all(np.diff(gevrey_ramp(u)) >= 0.0)


def test_plateau_hard_exact_regions():
    x = np.linspace(-np.pi, np.pi, 2048, endpoint=False)
    p = plateau_hard(x, 0.5, 1.0)
    assert np.all(p[np.abs(x) <= 0.5] == 1.0)
    assert np.all(p[np.abs(x) >= 1.0] == 0.0)
    # periodic wrap: the same plateau seen from x + 2 pi
    assert plateau_hard(np.array([2.0 * np.pi]), 0.5, 1.0)[0] == 1.0


def test_kaiser_window_normalization():
    c = kaiser_coefficients(24)
    assert c[0] == 1.0
    assert np.all(np.diff(c) < 0.0)
    assert c[-1] < 1e-8


def test_banded_plateau_band_and_flatness():
    # the Kaiser-smoothed indicator reaches ~1e-13 plateau quality one
    # kernel radius (30/band) away from the nominal edge
    band = 24
    half = 1.8
    c = plateau_banded_coefficients(half, band)
    n = 2048
    x = -np.pi + 2.0 * np.pi / n * np.arange(n)
    f = synthesize_even(c, x)
    spec = np.fft.rfft(f) / n
    assert np.all(np.abs(spec[band + 1:]) < 1e-15)
    margin = 30.0 / band
    inner = np.abs(x) <= half - margin
    outer = np.abs(x) >= half + margin
    assert np.max(np.abs(f[inner] - 1.0)) < 1e-12
    assert np.max(np.abs(f[outer])) < 1e-12


def test_banded_bump_is_banded():
    band = 40
    c = bump_banded_coefficients(0.05, band)
    n = 512
    x = -np.pi + 2.0 * np.pi / n * np.arange(n)
    f = synthesize_even(c, x)
    spec = np.fft.rfft(f) / n
    assert np.all(np.abs(spec[band + 1:]) < 1e-15)
    assert f[n // 2] == pytest.approx(np.max(f))


def test_time_kernel_mass_and_moment():
    # unit mass and first moment -1/2: constants certified by
    # tools/oracles/oracle_mollifier.py
    nu, w = gauss_legendre(20, -1.0, 0.0)
    k = time_kernel(nu)
    assert np.sum(w * k) == pytest.approx(1.0, abs=1e-15)
    assert np.sum(w * nu * k) == pytest.approx(-0.5, abs=1e-15)


def test_time_kernel_derivative_matches_difference_quotient():
    tau = np.linspace(-0.95, -0.05, 19)
    eps = 1e-6
    fd = (time_kernel(tau + eps) - time_kernel(tau - eps)) / (2.0 * eps)
    assert np.max(np.abs(fd - time_kernel_derivative(tau))) < 1e-6


def test_space_kernel_unit_mass():
    # radial normalization 5/pi certified by
    # tools/oracles/oracle_mollifier.py
    r, w = gauss_legendre(40, 0.0, 1.0)
    mass = np.sum(w * space_kernel_profile(r) * 2.0 * np.pi * r)
    assert mass == pytest.approx(1.0, abs=1e-14)


def test_gauss_legendre_polynomial_exactness():
    x, w = gauss_legendre(20, 0.0, 1.0)
    # degree 39 is the highest exactly integrated degree at n = 20
    assert np.sum(w * x ** 39) == pytest.approx(1.0 / 40.0, rel=1e-13)


def test_chebyshev_barycentric_interpolation():
    nodes, weights = chebyshev_nodes(12, 0.0, 1.0)
    vals = np.exp(nodes)
    for s in (0.1, 0.37, 0.925):
        c = barycentric_coefficients(nodes, weights, s)
        assert np.dot(c, vals) == pytest.approx(np.exp(s), abs=1e-12)
    c = barycentric_coefficients(nodes, weights, nodes[3])
    assert c[3] == 1.0 and np.sum(np.abs(c)) == 1.0
