"""Dyadic frequency decomposition and Besov-type norms on the torus.

The partition (version "lp-gevrey-v1") telescopes a Gevrey-glued radial
ramp: with ramp(s) = 1 for s <= 1, 0 for s >= 2, and
ramp(s) = psi(2 - s) / (psi(2 - s) + psi(s - 1)) between (psi(u) =
exp(-1/u)), block j carries theta_j(xi) = ramp(|xi| / 2^j) -
ramp(|xi| / 2^(j-1)).  The low block is ramp(2 |xi|), which on the
integer lattice captures exactly the mean.  The masks sum to 1 with no
error on any finite grid once the top block saturates, a mode of modulus
exactly 2^j lands in block j alone, and ramp(3/2) = 1/2 exactly
(certified by tools/oracles/oracle_norms.py).
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import gevrey_ramp

PARTITION_VERSION = "lp-gevrey-v1"

_partition_cache = {}


def _ramp(s):
    return gevrey_ramp(2.0 - s)


class LpPartition:
    """Dyadic block masks on a grid's rfft2 layout.

    Attributes: js (block indices, -1 is the low block), masks (one
    real mask per entry of js), version.
    """

    def __init__(self, grid):
        self.grid = grid
        self.version = PARTITION_VERSION
        kmod = np.sqrt(grid.k_sq)
        kmax = float(kmod.max())
        jmax = max(1, int(math.ceil(math.log2(kmax))) + 1)
        self.js = list(range(-1, jmax + 1))
        masks = [_ramp(2.0 * kmod)]
        for j in range(0, jmax + 1):
            masks.append(_ramp(kmod / 2.0 ** j) - _ramp(kmod / 2.0 ** (j - 1)))
        self.masks = masks

    def block(self, ah, j):
        """Apply the mask of block j to an rfft2 spectrum."""
        return ah * self.masks[self.js.index(j)]


def lp_blocks(grid):
    """Cached partition for a grid."""
    part = _partition_cache.get(id(grid))
    if part is None or part.grid is not grid:
        part = LpPartition(grid)
        _partition_cache[id(grid)] = part
    return part


@dataclass(frozen=True)
class BesovSpec:
    """Homogeneous Besov scale: smoothness s, integrability p, summation q."""

    s: float
    p: float
    q: float = 1.0

    def label(self):
        def fmt(v):
            return "inf" if np.isinf(v) else ("%g" % v)
        return "B[s=%g,p=%s,q=%s]" % (self.s, fmt(self.p), fmt(self.q))


@dataclass(frozen=True)
class TimeSeriesNorm:
    """Time integrability r over a Besov scale; chemin_lerner takes the
    time norm inside the block sum."""

    r: float
    space: BesovSpec
    chemin_lerner: bool = False


def _lp_norm(grid, a, p):
    mag = np.abs(a) if a.ndim == 2 else np.sqrt(np.sum(a * a, axis=0))
    if np.isinf(p):
        return float(np.max(mag))
    return float((np.sum(mag ** p) * grid.h ** 2) ** (1.0 / p))


def _lq_sum(vals, q):
    vals = np.asarray(vals, dtype=float)
    if np.isinf(q):
        return float(np.max(vals)) if vals.size else 0.0
    return float(np.sum(vals ** q) ** (1.0 / q))


def block_profile(grid, a, p=np.inf, skip_low=True):
    """Per-block L^p sizes [(j, value), ...] of a scalar or vector field."""
    part = lp_blocks(grid)
    a = np.asarray(a, dtype=float)
    comps = a[None] if a.ndim == 2 else a
    hats = [grid.fft(c) for c in comps]
    rows = []
    for idx, j in enumerate(part.js):
        if skip_low and j == -1:
            continue
        blk = np.stack([grid.ifft(h * part.masks[idx]) for h in hats])
        rows.append((j, _lp_norm(grid, blk if a.ndim == 3 else blk[0], p)))
    return rows


def besov_norm(grid, a, spec):
    """Homogeneous Besov norm of a scalar or vector grid field.

    The low (mean) block is excluded; fields of interest here are
    mean-free, and the homogeneous scaling weight is undefined for it.
    """
    rows = block_profile(grid, a, spec.p, skip_low=True)
    weighted = [2.0 ** (spec.s * j) * v for j, v in rows]
    return _lq_sum(weighted, spec.q)


def space_time_norm(grid, times, series, norm):
    """Space-time norm of a sampled trajectory.

    times: increasing sample instants; series: list of fields at those
    instants.  With chemin_lerner the L^r time norm is taken per block
    before the weighted block sum, otherwise the Besov norm is computed
    per instant and the L^r time norm is applied to that scalar signal.
    Time integrals use the trapezoid rule; r = inf takes the sup.
    """
    times = np.asarray(times, dtype=float)
    if len(times) != len(series):
        raise ValueError("times and series lengths differ")
    if not norm.chemin_lerner:
        sig = np.array([besov_norm(grid, f, norm.space) for f in series])
        return _time_norm(times, sig, norm.r)
    spec = norm.space
    block_signals = {}
    for f in series:
        rows = block_profile(grid, f, spec.p, skip_low=True)
        for j, v in rows:
            block_signals.setdefault(j, []).append(v)
    weighted = [2.0 ** (spec.s * j) * _time_norm(times, np.array(sig), norm.r)
                for j, sig in sorted(block_signals.items())]
    return _lq_sum(weighted, spec.q)


def _time_norm(times, sig, r):
    if np.isinf(r):
        return float(np.max(sig))
    if len(times) == 1:
        raise ValueError("finite-r time norm needs more than one sample")
    return float(np.trapezoid(sig ** r, times) ** (1.0 / r))


def holder_cn_norm(grid, a, n):
    """C^N norm: sum over orders 0..n of the worst mixed-derivative sup."""
    from .fields import dx1, dx2
    a = np.asarray(a, dtype=float)
    if a.ndim == 3:
        return max(holder_cn_norm(grid, c, n) for c in a)
    total = float(np.max(np.abs(a)))
    current = [a]
    for _ in range(n):
        nxt = []
        for f in current:
            nxt.append(dx1(grid, f))
        nxt.append(dx2(grid, current[-1]))
        total += max(np.max(np.abs(f)) for f in nxt)
        current = nxt
    return float(total)


def write_norm_rows(path, rows):
    """CSV report: quantity, j_range, value, partition version."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["quantity", "j_range", "value", "partition"])
        for quantity, j_range, value in rows:
            writer.writerow([quantity, j_range, "%.17g" % value,
                             PARTITION_VERSION])
