"""Error terms that close one step of the two-family construction.

The algebra implemented here is certified symbolically in
tools/oracles/oracle_identity.py.  Its claim 1 splits the
self-interaction of the fast flow's principal part into a pressure
gradient, slow-gradient residuals, and the diagonal reconstruction;
claim 2 splits the reconstruction's mean channel into two compensation
brackets plus the carried previous flow.  compute_error_bundle evaluates
those closed forms on the realized fields, verify_decomposition measures
how well the whole decomposition closes (with optional ablation of a
single term), and compute_forcings assembles the source terms the
corrector pair feels.
"""

from dataclasses import dataclass

import numpy as np

from .fields import advect, gradient, laplacian, tensor_divergence
from .geometry import pair_coefficients

__all__ = [
    "ErrorBundle", "DecompositionReport", "compute_error_bundle",
    "verify_decomposition", "compute_forcings",
]


def _sym_square(v):
    return np.stack([v[0] * v[0], v[0] * v[1], v[1] * v[1]])


def _sym_cross(u, v):
    """u (x) v + v (x) u as a symmetric (T11, T12, T22) stack."""
    return np.stack([2.0 * u[0] * v[0],
                     u[0] * v[1] + u[1] * v[0],
                     2.0 * u[1] * v[1]])


@dataclass(frozen=True)
class ErrorBundle:
    """Closed-form decomposition pieces of one level at one instant."""

    t: float
    p1: np.ndarray
    p2: np.ndarray
    e1: np.ndarray
    e2a: np.ndarray
    e2b: np.ndarray
    e3: np.ndarray

    @property
    def pressure(self):
        return self.p1 + self.p2

    @property
    def e2(self):
        return self.e2a + self.e2b

    @property
    def error(self):
        return self.e1 + self.e2 + self.e3


@dataclass(frozen=True)
class DecompositionReport:
    """Relative closure residuals of verify_decomposition."""

    rows: tuple
    worst: float
    ablated: str | None = None


def compute_error_bundle(grid, heat, cascade, t):
    """Evaluate the decomposition pieces of a level at instant t.

    heat is the level's fast-flow bundle and cascade the matching carried
    flow; the base level has neither a slow-amplitude model nor a carried
    previous flow, so the decomposition starts at level 2.
    """
    if heat.level < 2 or not hasattr(cascade, "prev"):
        raise ValueError("the decomposition starts at level 2: the base "
                         "level has no carried flow")
    lam = float(heat.lam)
    decay = heat.decay(t)
    decay2 = decay * decay
    a_fields = decay * heat.amplitude_fields(t)
    npairs = len(heat.pairs)
    kp = heat.k_perp
    cos, sin = heat.cos, heat.sin

    # spectral gradients of the pairwise slow products, shared between
    # the pressure channel and both gradient residuals
    grads = {}
    prods = {}
    for i in range(npairs):
        for j in range(i, npairs):
            pij = a_fields[i] * a_fields[j]
            prods[(i, j)] = pij
            grads[(i, j)] = gradient(grid, pij)

    # oracle_identity claim 1: interaction weights on the two carrier
    # classes of each unordered pair
    p1 = np.zeros((grid.n, grid.n))
    e1 = np.zeros((2, grid.n, grid.n))
    lam2 = lam * lam
    for i in range(npairs):
        for j in range(i + 1, npairs):
            dot = float(kp[i] @ kp[j])
            wp = dot - 1.0
            wm = -(dot + 1.0)
            cplus = cos[i] * cos[j] - sin[i] * sin[j]
            cminus = cos[i] * cos[j] + sin[i] * sin[j]
            carrier = wp * cplus + wm * cminus
            p1 += -2.0 * lam2 * prods[(i, j)] * carrier
            e1 += 2.0 * lam2 * carrier * grads[(i, j)]
    for i in range(npairs):
        for j in range(npairs):
            key = (i, j) if i <= j else (j, i)
            kg = kp[i, 0] * grads[key][0] + kp[i, 1] * grads[key][1]
            if i == j:
                # double-sum diagonal minus the reconstruction that
                # claim 2 replaces
                core = lam2 * (4.0 * sin[i] * sin[j] - 2.0) * kg
            else:
                core = 4.0 * lam2 * sin[i] * sin[j] * kg
            e1[0] += core * kp[j, 0]
            e1[1] += core * kp[j, 1]

    # oracle_identity claim 2: compensation brackets of the mean channel,
    # evaluated at the exact previous potential
    c0 = float(cascade.c0)
    theta = cascade.theta
    phi = heat.cutoffs.profiles[heat.level].fields
    amps = heat.amp_model.at(t)
    rw = cascade.prev.potential(t)
    scale = 1.0 / (1000.0 * c0)
    vals = pair_coefficients(1.0 + scale * rw[0], scale * rw[1],
                             1.0 + scale * rw[2])
    coef = 2.0 * lam2 * decay2
    tens_a = np.zeros((3, grid.n, grid.n))
    tens_b = np.zeros((3, grid.n, grid.n))
    for idx, p in enumerate(heat.pairs):
        target = 1000.0 * c0 * vals[p]
        ca = coef * theta * phi[idx] ** 2 * (amps[idx] ** 2 - target)
        cb = coef * theta * (phi[idx] ** 2 - 1.0) * target
        kpv = kp[idx]
        for slot, kk in ((0, kpv[0] * kpv[0]), (1, kpv[0] * kpv[1]),
                         (2, kpv[1] * kpv[1])):
            tens_a[slot] += ca * kk
            tens_b[slot] += cb * kk
    e2a = tensor_divergence(grid, tens_a)
    e2b = tensor_divergence(grid, tens_b)
    p2 = 2000.0 * c0 * lam2 * decay2 * theta

    # cross-interaction of the principal and remainder parts plus the
    # drift of the carried flow
    m = heat.principal(t)
    r = heat.remainder(t)
    cross = _sym_cross(m, r) + _sym_square(r)
    e3 = tensor_divergence(grid, cross) + decay2 * cascade.prev.flow_dt(t)

    return ErrorBundle(t=float(t), p1=p1, p2=p2, e1=e1, e2a=e2a, e2b=e2b,
                       e3=e3)


def verify_decomposition(grid, heat, cascade, times, ablate=None):
    """Relative closure residual of the full decomposition identity.

    Checks div(w (x) w) + d/dt w_carried = grad(P1 + P2) + E1 + E2 + E3
    at each requested instant; ablate drops one of "e1", "e2", "e3" from
    the right-hand side so tests can confirm every term carries weight.
    """
    if ablate not in (None, "e1", "e2", "e3"):
        raise ValueError("unknown ablation %r; have e1, e2, e3" % (ablate,))
    rows = []
    worst = 0.0
    for t in times:
        t = float(t)
        bundle = compute_error_bundle(grid, heat, cascade, t)
        w = heat.flow(t)
        lhs = tensor_divergence(grid, _sym_square(w)) + cascade.flow_dt(t)
        grad_p = gradient(grid, bundle.p1 + bundle.p2)
        terms = {"e1": bundle.e1, "e2": bundle.e2, "e3": bundle.e3}
        rhs = grad_p.copy()
        for name, term in terms.items():
            if name != ablate:
                rhs += term
        scale = max(float(np.max(np.abs(lhs))),
                    float(np.max(np.abs(grad_p))),
                    *(float(np.max(np.abs(v))) for v in terms.values()))
        rel = float(np.max(np.abs(lhs - rhs))) / scale
        rows.append((t, rel, scale))
        worst = max(worst, rel)
    return DecompositionReport(rows=tuple(rows), worst=worst, ablated=ablate)


def compute_forcings(grid, heat, cascade, t, u_prev, b_prev):
    """Source terms the corrector pair feels at instant t.

    The momentum forcing collects the heat defect of the fast flow, the
    missing dissipation of the carried flow, and every cross-interaction
    with the previous branch velocity; the induction forcing is the
    commutator of the added flows with the previous branch field.
    """
    wh = heat.flow(t)
    wi = cascade.flow(t)
    f = heat.flow_dt(t)
    f = f - np.stack([laplacian(grid, wh[0]), laplacian(grid, wh[1])])
    f = f - np.stack([laplacian(grid, wi[0]), laplacian(grid, wi[1])])
    v = wi + u_prev
    tens = (_sym_cross(wh, v) + _sym_cross(wi, u_prev) + _sym_square(wi))
    f = f + tensor_divergence(grid, tens)
    s = wh + wi
    g = advect(grid, s, b_prev) - advect(grid, b_prev, s)
    return f, g
