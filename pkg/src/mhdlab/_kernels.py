"""Shared 1D construction kernels: bumps, ramps, plateaus, quadrature.

Two envelope construction modes are used throughout the package:

* "hard": compactly supported Gevrey-type bumps and plateaus.  These are
  exactly 1 on their inner region and exactly 0 outside their support on
  the grid, at the price of unbounded (but super-exponentially decaying)
  Fourier content.

* "banded": strictly band-limited plateaus synthesized in coefficient
  space as (indicator Fourier coefficients) x (Kaiser window).  These
  occupy a hard frequency band at the price of plateau flatness and
  support leakage at the kernel quality level (~1e-12 for beta = 30).

All 1D profiles live on the 2 pi torus.
"""

import numpy as np
from scipy.special import i0


def gevrey_bump(s, alpha=3.0):
    """Bump exp(alpha - alpha/(1 - s^2)) on |s| < 1, exactly 0 outside.

    Peak value 1 at s = 0.  alpha controls the tail steepness of the
    Fourier transform; alpha = 3 puts the relative spectral tail of the
    unit-half-width bump below 1e-15 at wavenumber ~340.
    """
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = np.exp(alpha - alpha / (1.0 - si * si))
    return out


def gevrey_ramp(u, alpha=1.0):
    """Monotone ramp: 0 for u <= 0, 1 for u >= 1, Gevrey glue between.

    ramp(1/2) = 1/2 exactly by symmetry.  alpha steepens the spectral
    tail (roughly exp(-2 sqrt(alpha k W)) for transition width W) at the
    price of compressing the variation into the middle of the interval.
    """
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    out[u >= 1.0] = 1.0
    mid = (u > 0.0) & (u < 1.0)
    um = u[mid]
    a = np.exp(-alpha / um)
    b = np.exp(-alpha / (1.0 - um))
    out[mid] = a / (a + b)
    return out


def plateau_hard(x, inner, outer, alpha=1.0):
    """Even plateau on the 2 pi torus: exactly 1 on [-inner, inner],
    exactly 0 for |x| >= outer (distances on the circle)."""
    if not 0.0 < inner < outer <= np.pi:
        raise ValueError("need 0 < inner < outer <= pi")
    d = np.abs(np.mod(np.asarray(x, dtype=float) + np.pi, 2.0 * np.pi) - np.pi)
    return gevrey_ramp((outer - d) / (outer - inner), alpha)


def kaiser_coefficients(band, beta=30.0):
    """Kaiser window c_0..c_band with c_0 = 1 (unit-mass smoothing kernel)."""
    n = np.arange(band + 1, dtype=float)
    return i0(beta * np.sqrt(1.0 - (n / (band + 1.0)) ** 2)) / i0(beta)


def plateau_banded_coefficients(half_width, band, beta=30.0):
    """Fourier cosine coefficients of a band-limited plateau.

    Returns c[0..band] such that f(x) = c[0] + 2 sum_n c[n] cos(n x) is
    ~1 on [-half_width + delta, half_width - delta] and ~0 outside
    [-half_width - delta, half_width + delta], with transition width
    delta ~ 60/band and flatness at the Kaiser kernel quality.

    The plateau is the periodic indicator of [-half_width, half_width]
    convolved with the Kaiser kernel: coefficient products.
    """
    n = np.arange(band + 1, dtype=float)
    ind = np.empty(band + 1)
    ind[0] = half_width / np.pi
    ind[1:] = np.sin(n[1:] * half_width) / (n[1:] * np.pi)
    return ind * kaiser_coefficients(band, beta)


def synthesize_even(coeffs, x):
    """Evaluate c[0] + 2 sum_{n>=1} c[n] cos(n x) on points x."""
    x = np.asarray(x, dtype=float)
    out = np.full_like(x, coeffs[0])
    for n in range(1, len(coeffs)):
        out += 2.0 * coeffs[n] * np.cos(n * x)
    return out


def bump_banded_coefficients(half_width, band, beta=30.0):
    """Coefficients of a band-limited even bump: the banded plateau of
    half the width convolved once more with the Kaiser kernel, suitable
    where a nonnegative-leaning localized kernel is wanted."""
    return (plateau_banded_coefficients(half_width, band, beta)
            * kaiser_coefficients(band, beta))


def time_kernel(tau):
    """Mollifier shape on (-1, 0): (315/128) (1 - (2 tau + 1)^2)^4.

    Unit integral (constant certified by tools/oracles/oracle_mollifier.py).
    Vanishes with its first three derivatives at both endpoints.
    """
    tau = np.asarray(tau, dtype=float)
    out = np.zeros_like(tau)
    inside = (tau > -1.0) & (tau < 0.0)
    v = 2.0 * tau[inside] + 1.0
    out[inside] = (315.0 / 128.0) * (1.0 - v * v) ** 4
    return out


def time_kernel_derivative(tau):
    """d/dtau of time_kernel on (-1, 0)."""
    tau = np.asarray(tau, dtype=float)
    out = np.zeros_like(tau)
    inside = (tau > -1.0) & (tau < 0.0)
    v = 2.0 * tau[inside] + 1.0
    out[inside] = (315.0 / 128.0) * 4.0 * (1.0 - v * v) ** 3 * (-2.0 * v) * 2.0
    return out


def space_kernel_profile(r):
    """Radial mollifier (5/pi) (1 - r^2)^4 on r < 1, 0 outside.

    Unit mass on the unit disk (constant certified by
    tools/oracles/oracle_mollifier.py).
    """
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = r < 1.0
    out[inside] = (5.0 / np.pi) * (1.0 - r[inside] ** 2) ** 4
    return out


def gauss_legendre(n, a, b):
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def chebyshev_nodes(n, a, b):
    """Chebyshev points of the second kind on [a, b] (n points, endpoints
    included), together with barycentric weights."""
    if n < 2:
        raise ValueError("need at least 2 nodes")
    j = np.arange(n, dtype=float)
    x = np.cos(np.pi * j / (n - 1))
    w = (-1.0) ** j
    w[0] *= 0.5
    w[-1] *= 0.5
    return 0.5 * (b - a) * x[::-1] + 0.5 * (a + b), w[::-1]


def barycentric_coefficients(nodes, weights, s):
    """Coefficients c_j with f(s) = sum_j c_j f(nodes_j) (barycentric)."""
    s = float(s)
    diff = s - nodes
    hit = np.nonzero(diff == 0.0)[0]
    c = np.zeros_like(nodes)
    if hit.size:
        c[hit[0]] = 1.0
        return c
    t = weights / diff
    return t / t.sum()
