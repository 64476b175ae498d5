"""Direction set, symmetric-matrix decomposition, stationary shear flows.

The eight directions {+-(1,0), +-(0,1), +-(3,4)/5, +-(3,-4)/5} admit an
affine decomposition of symmetric 2x2 matrices near the identity,

    R = sum_k a_k^2(R) k_perp (x) k_perp,

with a_{-k} = a_k, so only the four pair representatives are stored.  The
pair coefficients are affine in R with a free diagonal split c:

    pair +-(0,1):  alpha      = r11 - (32/25) c
    pair +-(1,0):  beta       = r22 - (18/25) c
    pair +-p:      gamma_plus = c - (25/24) r12
    pair +-q:      gamma_minus= c + (25/24) r12

(c = 1/4 throughout; identity and positivity constants certified in exact
arithmetic by tools/oracles/oracle_geometry.py).  Per-direction squared
amplitudes are half the pair values.
"""

import numpy as np

from .fields import divergence, gradient, tensor_divergence

PAIR_NAMES = ("e1", "e2", "p", "q")

# integer representatives: direction = num / den
_NUM = ((5, 0), (0, 5), (3, 4), (3, -4))
_DEN = 5


class DirectionSet:
    """The four pair representatives of the eight-direction family."""

    def __init__(self):
        self.names = PAIR_NAMES
        self.num = np.array(_NUM, dtype=int)
        self.den = _DEN
        self.k = self.num / float(self.den)
        self.k_perp = np.stack([-self.k[:, 1], self.k[:, 0]], axis=1)
        self.num_perp = np.stack([-self.num[:, 1], self.num[:, 0]], axis=1)

    def __len__(self):
        return len(self.names)

    def carrier(self, pair, lam):
        """Integer wave vector lam * k for the pair; lam must make it
        integral (multiples of 5 always do)."""
        m = lam * self.num[pair]
        if m[0] % self.den or m[1] % self.den:
            raise ValueError("carrier %r not integral for lam=%r"
                             % (self.names[pair], lam))
        return m // self.den


def build_direction_set():
    """The canonical direction set; there is exactly one."""
    return DirectionSet()


def pair_coefficients(r11, r12, r22, c=0.25):
    """Affine pair coefficients (beta, alpha, gamma_plus, gamma_minus)
    ordered like PAIR_NAMES; works on scalars or arrays."""
    r11, r12, r22 = np.broadcast_arrays(
        np.asarray(r11, dtype=float), np.asarray(r12, dtype=float),
        np.asarray(r22, dtype=float))
    return np.stack([
        r22 - (18.0 / 25.0) * c,
        r11 - (32.0 / 25.0) * c,
        c - (25.0 / 24.0) * r12,
        c + (25.0 / 24.0) * r12,
    ])


def decompose_symmetric(r, c=0.25, validate=True):
    """Per-direction squared amplitudes a_k^2 for R = (r11, r12, r22).

    Returns an array of shape (4,) + r[0].shape in PAIR_NAMES order; each
    of the two opposite directions in a pair carries the returned value,
    so the full eight-direction sum reconstructs R.
    """
    r = np.asarray(r, dtype=float)
    vals = 0.5 * pair_coefficients(r[0], r[1], r[2], c)
    if validate:
        mins = vals.reshape(4, -1).min(axis=1)
        worst = int(np.argmin(mins))
        if mins[worst] <= 0.0:
            raise ValueError(
                "decomposition loses positivity on pair %r (min %.3e); "
                "input too far from the identity"
                % (PAIR_NAMES[worst], mins[worst]))
    return vals


def reconstruct_symmetric(vals, dirs=None):
    """Inverse of decompose_symmetric: sum of 2 * a_k^2 k_perp (x) k_perp."""
    if dirs is None:
        dirs = build_direction_set()
    vals = np.asarray(vals, dtype=float)
    shape = vals.shape[1:]
    out = np.zeros((3,) + shape)
    for p in range(len(dirs)):
        kp = dirs.k_perp[p]
        out[0] += 2.0 * vals[p] * kp[0] * kp[0]
        out[1] += 2.0 * vals[p] * kp[0] * kp[1]
        out[2] += 2.0 * vals[p] * kp[1] * kp[1]
    return out


class GeometricDecomposition:
    """Decomposition helper bound to the direction set and the positivity
    ball of radius sigma around the identity (max-norm on entries)."""

    def __init__(self, c=0.25, sigma=1e-3):
        self.dirs = build_direction_set()
        self.c = c
        self.sigma = sigma

    def decompose(self, r, validate=True):
        return decompose_symmetric(r, self.c, validate)

    def amplitudes(self, r, validate=True):
        return np.sqrt(self.decompose(r, validate))

    def reconstruct(self, vals):
        return reconstruct_symmetric(vals, self.dirs)

    def in_ball(self, r):
        r = np.asarray(r, dtype=float)
        return bool(max(np.max(np.abs(r[0] - 1.0)), np.max(np.abs(r[1])),
                        np.max(np.abs(r[2] - 1.0))) <= self.sigma)


def stationary_flow(grid, b, lam, dirs=None):
    """Stationary pressure-balanced shear family on the grid.

    W = sum_pairs -2 b_p sin(lam k_p . x) k_p_perp, the real form of the
    eight-direction sum of b_k i k_perp e^{i lam k . x} with b_{-k} = b_k.
    Returns (W, S, pressure) with the scalar companion
    S = 2 sum_pairs b_p cos(lam k_p . x) and

        pressure = (|W|^2 + |S|^2) / 2 - 2 sum_pairs b_p^2,

    which satisfies div(W (x) W) = grad pressure exactly (adjudicated
    against the sign-flipped candidate by tools/oracles/oracle_mikado.py).
    """
    if dirs is None:
        dirs = build_direction_set()
    b = np.asarray(b, dtype=float)
    if b.shape != (len(dirs),):
        raise ValueError("need one coefficient per pair")
    w = np.zeros((2, grid.n, grid.n))
    s = np.zeros((grid.n, grid.n))
    for p in range(len(dirs)):
        if b[p] == 0.0:
            continue
        m = dirs.carrier(p, lam)
        phase = m[0] * grid.x1 + m[1] * grid.x2
        kp = dirs.k_perp[p]
        sin = np.sin(phase)
        w[0] += -2.0 * b[p] * sin * kp[0]
        w[1] += -2.0 * b[p] * sin * kp[1]
        s += 2.0 * b[p] * np.cos(phase)
    pressure = 0.5 * (w[0] ** 2 + w[1] ** 2 + s ** 2) - 2.0 * np.sum(b ** 2)
    return w, s, pressure


def verify_mikado_identity(grid, b, lam, dirs=None):
    """Spectral residuals of the stationary-flow relations on the grid.

    Returns a dict with the max-norm residuals of div W = 0 and
    div(W (x) W) = grad pressure, plus the pressure mean.  The grid must
    resolve the quadratic band (2 lam below the Nyquist mode).
    """
    if 2 * lam >= grid.n // 2:
        raise ValueError("grid too coarse for carrier %d" % lam)
    w, _, pressure = stationary_flow(grid, b, lam, dirs)
    t = np.stack([w[0] * w[0], w[0] * w[1], w[1] * w[1]])
    lhs = tensor_divergence(grid, t)
    rhs = gradient(grid, pressure)
    scale = max(np.max(np.abs(lhs)), 1.0)
    return {
        "div_w": float(np.max(np.abs(divergence(grid, w)))),
        "momentum": float(np.max(np.abs(lhs - rhs)) / scale),
        "pressure_mean": float(np.mean(pressure)),
    }
