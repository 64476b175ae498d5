"""Periodic grids, spectral calculus, mollifiers, and field I/O.

Everything lives on the square torus [-pi, pi)^2 sampled on an N x N
uniform grid.  Transforms use the real 2D FFT; wavenumbers are integers.
Conventions: perp_gradient f = (d2 f, -d1 f), curl v = d1 v2 - d2 v1,
divergence of a symmetric tensor T is (div T)_j = d_i T_ij.
"""

import json
import os

import numpy as np
import scipy.fft as sfft

from ._kernels import gauss_legendre, space_kernel_profile, time_kernel, \
    time_kernel_derivative

_WORKERS = 2


class Grid:
    """Uniform N x N sampling of the 2 pi torus with rfft2 wavenumbers."""

    def __init__(self, n):
        if n < 4 or n % 2:
            raise ValueError("grid size must be even and >= 4")
        self.n = n
        self.h = 2.0 * np.pi / n
        self.x = -np.pi + self.h * np.arange(n)
        self.x1 = self.x[:, None] * np.ones((1, n))
        self.x2 = np.ones((n, 1)) * self.x[None, :]
        k1 = np.fft.fftfreq(n, d=1.0 / n)
        k2 = np.arange(n // 2 + 1, dtype=float)
        self.k1 = k1[:, None] * np.ones((1, n // 2 + 1))
        self.k2 = np.ones((n, 1)) * k2[None, :]
        self.k_sq = self.k1 ** 2 + self.k2 ** 2
        kmax = n // 3
        self.dealias = (np.abs(self.k1) <= kmax) & (self.k2 <= kmax)
        self.dealias_kmax = kmax
        self._inv_k_sq = np.zeros_like(self.k_sq)
        nonzero = self.k_sq > 0.0
        self._inv_k_sq[nonzero] = 1.0 / self.k_sq[nonzero]

    def fft(self, a):
        return sfft.rfft2(a, workers=_WORKERS)

    def ifft(self, ah):
        return sfft.irfft2(ah, s=(self.n, self.n), workers=_WORKERS)

    def mean(self, a):
        return float(np.mean(a))

    def band(self, a, rel_tol=1e-13):
        """Largest max-norm wavenumber carrying relative amplitude above
        rel_tol; 0 for constants."""
        ah = np.abs(self.fft(a))
        top = ah.max()
        if top == 0.0:
            return 0
        live = ah > rel_tol * top
        if not live.any():
            return 0
        kinf = np.maximum(np.abs(self.k1), self.k2)
        return int(kinf[live].max())


class ScalarField:
    """Named scalar sample array on a grid."""

    kind = "scalar"

    def __init__(self, grid, data, name=""):
        self.grid = grid
        self.data = np.asarray(data, dtype=float)
        self.name = name
        if self.data.shape != (grid.n, grid.n):
            raise ValueError("scalar data must be (n, n)")


class VectorField:
    """Two-component field; data shape (2, n, n)."""

    kind = "vector"

    def __init__(self, grid, data, name=""):
        self.grid = grid
        self.data = np.asarray(data, dtype=float)
        self.name = name
        if self.data.shape != (2, grid.n, grid.n):
            raise ValueError("vector data must be (2, n, n)")


class SymTensorField:
    """Symmetric 2x2 tensor field stored as (T11, T12, T22); shape (3, n, n)."""

    kind = "symtensor"

    def __init__(self, grid, data, name=""):
        self.grid = grid
        self.data = np.asarray(data, dtype=float)
        self.name = name
        if self.data.shape != (3, grid.n, grid.n):
            raise ValueError("symtensor data must be (3, n, n)")


def dx1(grid, a):
    return grid.ifft(1j * grid.k1 * grid.fft(a))


def dx2(grid, a):
    return grid.ifft(1j * grid.k2 * grid.fft(a))


def laplacian(grid, a):
    return grid.ifft(-grid.k_sq * grid.fft(a))


def inv_laplacian(grid, a):
    """Zero-mean inverse Laplacian (the mean of the input is dropped)."""
    return grid.ifft(-grid._inv_k_sq * grid.fft(a))


def gradient(grid, a):
    ah = grid.fft(a)
    return np.stack([grid.ifft(1j * grid.k1 * ah),
                     grid.ifft(1j * grid.k2 * ah)])


def perp_gradient(grid, a):
    ah = grid.fft(a)
    return np.stack([grid.ifft(1j * grid.k2 * ah),
                     grid.ifft(-1j * grid.k1 * ah)])


def curl(grid, v):
    return grid.ifft(1j * grid.k1 * grid.fft(v[1])
                     - 1j * grid.k2 * grid.fft(v[0]))


def divergence(grid, v):
    return grid.ifft(1j * grid.k1 * grid.fft(v[0])
                     + 1j * grid.k2 * grid.fft(v[1]))


def tensor_divergence(grid, t):
    """(div T)_j = d_i T_ij for T = (T11, T12, T22)."""
    t11, t12, t22 = grid.fft(t[0]), grid.fft(t[1]), grid.fft(t[2])
    return np.stack([
        grid.ifft(1j * grid.k1 * t11 + 1j * grid.k2 * t12),
        grid.ifft(1j * grid.k1 * t12 + 1j * grid.k2 * t22)])


def advect(grid, a, v):
    """(a . grad) v for vector fields a and v."""
    return np.stack([
        a[0] * dx1(grid, v[0]) + a[1] * dx2(grid, v[0]),
        a[0] * dx1(grid, v[1]) + a[1] * dx2(grid, v[1])])


_OPERATORS = {
    "dx1": dx1, "dx2": dx2, "laplacian": laplacian,
    "inv_laplacian": inv_laplacian, "gradient": gradient,
    "perp_gradient": perp_gradient, "curl": curl, "divergence": divergence,
    "tensor_divergence": tensor_divergence,
}


def spectral_operator(grid, name):
    """Look up a spectral operator by name and bind it to a grid."""
    try:
        op = _OPERATORS[name]
    except KeyError:
        raise ValueError("unknown operator %r; have %s"
                         % (name, sorted(_OPERATORS))) from None
    return lambda a: op(grid, a)


def leray_project(grid, v):
    """Remove the gradient part: v - grad inv_laplacian div v."""
    v1h, v2h = grid.fft(v[0]), grid.fft(v[1])
    dh = 1j * grid.k1 * v1h + 1j * grid.k2 * v2h
    ph = -grid._inv_k_sq * dh
    return np.stack([grid.ifft(v1h - 1j * grid.k1 * ph),
                     grid.ifft(v2h - 1j * grid.k2 * ph)])


def tensor_potential(grid, w):
    """Symmetric tensor R with div R = w for mean-free divergence-free w.

    R = (grad + grad^T) inv_laplacian w, returned as (R11, R12, R22).
    """
    g1 = grid.fft(inv_laplacian(grid, w[0]))
    g2 = grid.fft(inv_laplacian(grid, w[1]))
    r11 = grid.ifft(2j * grid.k1 * g1)
    r12 = grid.ifft(1j * grid.k1 * g2 + 1j * grid.k2 * g1)
    r22 = grid.ifft(2j * grid.k2 * g2)
    return np.stack([r11, r12, r22])


class MollifierPair:
    """Space mollifier at scale eps_x and time mollifier at scale eps_t.

    Space: psi_eps(x) = eps^-2 psi(x/eps) with the radial profile
    (5/pi)(1 - r^2)^4, sampled on the grid and renormalized so its
    discrete mass is exactly 1 (convolution then preserves constants to
    machine precision).  With band set, the spatial kernel is instead a
    radial Kaiser low-pass supported on |k| < band, unity at k = 0, so
    mollified fields are exactly band-limited.  Time: the
    (315/128)(1 - (2 tau + 1)^2)^4 shape supported on (-eps_t, 0), which
    averages a trajectory over [t, t + eps_t]; exposed as Gauss-Legendre
    nodes and weights.  The scales split because the spatial kernel must
    stay resolvable on the grid while the time window must stay short
    against the fastest retained decay.
    """

    def __init__(self, grid, eps_x, eps_t=None, n_quad=20, band=None,
                 beta=30.0):
        if not 0.0 < eps_x < np.pi / 2:
            raise ValueError("mollifier scale must lie in (0, pi/2)")
        if eps_t is None:
            eps_t = eps_x
        if eps_t < 0.0:
            raise ValueError("time mollifier scale must be nonnegative")
        self.grid = grid
        self.eps_x = eps_x
        self.eps_t = eps_t
        if band is not None:
            kmag = np.sqrt(grid.k_sq)
            s = np.clip(kmag / band, 0.0, 1.0)
            win = np.where(s < 1.0,
                           np.i0(beta * np.sqrt(np.maximum(
                               1.0 - s ** 2, 0.0))) / np.i0(beta),
                           0.0)
            self._kern_hat = win
        else:
            # periodic distance to the origin in each coordinate; the
            # sampled kernel is rolled so its center sits at index (0, 0)
            # for FFT convolution
            xc = np.abs(np.mod(grid.x1 + np.pi, 2.0 * np.pi) - np.pi)
            yc = np.abs(np.mod(grid.x2 + np.pi, 2.0 * np.pi) - np.pi)
            r = np.sqrt(xc ** 2 + yc ** 2) / eps_x
            kern = space_kernel_profile(r) / eps_x ** 2
            mass = kern.sum() * grid.h ** 2
            if mass <= 0.0:
                raise ValueError("mollifier scale below grid resolution")
            kern /= mass
            self._kern_hat = grid.fft(np.roll(kern,
                                              (-grid.n // 2, -grid.n // 2),
                                              axis=(0, 1))) * grid.h ** 2
        nu, w = gauss_legendre(n_quad, 0.0, 1.0)
        self._nu = nu
        self._w_avg = w * time_kernel(-nu)
        if eps_t > 0.0:
            self._w_dt = w * time_kernel_derivative(-nu) / eps_t
        else:
            self._w_dt = None

    def mollify(self, a):
        """Spatial mollification of a scalar or stacked-component array."""
        a = np.asarray(a, dtype=float)
        if a.ndim == 2:
            return self.grid.ifft(self.grid.fft(a) * self._kern_hat)
        return np.stack([self.mollify(c) for c in a])

    def time_nodes(self, t):
        """Sample points in [t, t + eps_t] for the forward time average."""
        return t + self.eps_t * self._nu

    def time_weights(self):
        """Weights pairing with time_nodes samples; they sum to 1."""
        return self._w_avg

    def time_weights_dt(self):
        """Weights giving the t-derivative of the forward time average."""
        if self._w_dt is None:
            raise ValueError("time mollifier scale is zero")
        return self._w_dt


def mollify(grid, a, eps):
    """One-shot spatial mollification at scale eps."""
    return MollifierPair(grid, eps).mollify(a)


def save_field(directory, name, data, meta=None):
    """Write raw little-endian float64 (row-major) plus a JSON sidecar."""
    os.makedirs(directory, exist_ok=True)
    arr = np.ascontiguousarray(np.asarray(data, dtype="<f8"))
    with open(os.path.join(directory, name + ".f64"), "wb") as fh:
        fh.write(arr.tobytes())
    sidecar = {"dtype": "<f8", "order": "C", "shape": list(arr.shape)}
    if meta:
        sidecar.update(meta)
    with open(os.path.join(directory, name + ".json"), "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_field(directory, name):
    """Read a field written by save_field; returns (array, sidecar dict)."""
    with open(os.path.join(directory, name + ".json")) as fh:
        sidecar = json.load(fh)
    raw = np.fromfile(os.path.join(directory, name + ".f64"), dtype="<f8")
    return raw.reshape(sidecar["shape"]), sidecar
