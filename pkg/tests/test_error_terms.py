"""Decomposition error terms, pressures, and the forced-system sources.

The banded working stack keeps every quantity in the identity an exactly
representable trigonometric polynomial (worst product band 254 <= 255 at
N = 512), so the verification residual measures only the mask-sidelobe
leakage of the closure replacement; the interaction algebra itself is
certified symbolically by tools/oracles/oracle_identity.py.
"""

import numpy as np
import pytest

from mhdlab.building_blocks import (
    build_amplitude_model,
    build_w_h,
    build_w_i,
    make_cutoffs,
    make_schedule,
    resolve_c0,
)
from mhdlab.error_terms import (
    compute_error_bundle,
    compute_forcings,
    verify_decomposition,
)
from mhdlab.fields import (
    Grid,
    gradient,
    leray_project,
    perp_gradient,
    tensor_divergence,
)


class StillFlow:
    """Previous level that carries nothing: zero flow, zero potential.

    Exercises the degenerate branch where the geometric amplitudes are
    spatially constant and the inverse cascade is empty.
    """

    level = 1

    def __init__(self, grid):
        self.grid = grid

    def flow(self, t):
        return np.zeros((2, self.grid.n, self.grid.n))

    def flow_dt(self, t):
        return np.zeros((2, self.grid.n, self.grid.n))

    def potential(self, t):
        return np.zeros((3, self.grid.n, self.grid.n))

    def ic(self):
        return self.flow(0.0)


@pytest.fixture(scope="module")
def banded512():
    """Banded two-level stack with masks sharp enough that the closure
    replacement (previous flow absorbed by the squared cutoff) sits at
    the 1e-8 level; see the band budget note in the module docstring."""
    grid = Grid(512)
    sched = make_schedule(512, (10, 40), (5, 5), mode="banded",
                          c0_policy="auto", m_phi=2, band_chi=31,
                          band_eta=25, band_psi=21, band_beta=9.0,
                          eta_margin=(1.5, 0.7, 0.15),
                          chi_delta=(0.785, 0.785))
    cuts = make_cutoffs(grid, sched)
    w1 = build_w_h(grid, sched, 1, cutoffs=cuts)
    c0 = resolve_c0(sched, 2, w1)
    # the banded absorption defect is the mask sidelobe level (~5e-4
    # here), not a geometry bug; gate at the regime's honest tolerance
    wi = build_w_i(grid, sched, 2, cuts, w1, c0, check_tol=1e-3)
    amp = build_amplitude_model(grid, sched, 2, w1, c0)
    w2 = build_w_h(grid, sched, 2, cutoffs=cuts, amp_model=amp)
    times = (0.0, 1.0 / 1600.0, 2.0 / 1600.0)
    return dict(grid=grid, sched=sched, cuts=cuts, w1=w1, c0=c0, wi=wi,
                w2=w2, times=times)


@pytest.fixture(scope="module")
def still256():
    """Tiny stack over an empty previous level."""
    grid = Grid(256)
    sched = make_schedule(256, (5, 10), (5, 5), mode="banded", c0=1.0,
                          m_phi=2, band_chi=15, band_eta=12, band_psi=9,
                          band_beta=6.0, eta_margin=(1.5, 0.7, 0.15),
                          chi_delta=(0.6, 0.6))
    cuts = make_cutoffs(grid, sched)
    prev = StillFlow(grid)
    wi = build_w_i(grid, sched, 2, cuts, prev, 1.0)
    amp = build_amplitude_model(grid, sched, 2, prev, 1.0)
    w2 = build_w_h(grid, sched, 2, cutoffs=cuts, amp_model=amp)
    return dict(grid=grid, sched=sched, wi=wi, w2=w2)


def test_decomposition_residual(banded512):
    rep = verify_decomposition(banded512["grid"], banded512["w2"],
                               banded512["wi"], banded512["times"])
    assert rep.worst < 1e-7
    assert len(rep.rows) == 3
    assert rep.ablated is None
    for t, rel, scale in rep.rows:
        assert rel <= rep.worst
        assert scale > 0.0


def test_ablations_are_loud(banded512):
    base = verify_decomposition(banded512["grid"], banded512["w2"],
                                banded512["wi"], banded512["times"])
    for tag in ("e1", "e2", "e3"):
        rep = verify_decomposition(banded512["grid"], banded512["w2"],
                                   banded512["wi"], banded512["times"],
                                   ablate=tag)
        assert rep.ablated == tag
        assert rep.worst > 1e4 * base.worst


def test_unknown_ablation_is_rejected(banded512):
    with pytest.raises(ValueError, match="unknown ablation"):
        verify_decomposition(banded512["grid"], banded512["w2"],
                             banded512["wi"], banded512["times"],
                             ablate="pressure")


def test_base_level_has_no_decomposition(banded512):
    with pytest.raises(ValueError, match="starts at level 2"):
        compute_error_bundle(banded512["grid"], banded512["w1"],
                             banded512["wi"], 0.0)


def test_bundle_component_shapes_and_sums(banded512):
    n = banded512["grid"].n
    b = compute_error_bundle(banded512["grid"], banded512["w2"],
                             banded512["wi"], banded512["times"][1])
    assert b.p1.shape == (n, n)
    assert b.p2.shape == (n, n)
    for comp in (b.e1, b.e2a, b.e2b, b.e3):
        assert comp.shape == (2, n, n)
    assert np.array_equal(b.e2, b.e2a + b.e2b)
    assert np.array_equal(b.error, b.e1 + b.e2 + b.e3)
    assert np.array_equal(b.pressure, b.p1 + b.p2)


def test_explicit_decay_prefactor(banded512):
    """P2 carries the bare e^{-2 lam^2 t} factor exactly; the other
    components also carry slow amplitude drift from the previous level,
    so only the gross rate is pinned for them."""
    grid = banded512["grid"]
    lam = banded512["sched"].lam_of(2)
    t = 1.0 / lam ** 2
    b0 = compute_error_bundle(grid, banded512["w2"], banded512["wi"], 0.0)
    bt = compute_error_bundle(grid, banded512["w2"], banded512["wi"], t)
    drop = np.exp(-2.0)
    ratio_p2 = np.max(np.abs(bt.p2)) / np.max(np.abs(b0.p2))
    assert abs(ratio_p2 - drop) < 1e-12
    for a, b in ((b0.e1, bt.e1), (b0.e2, bt.e2), (b0.e3, bt.e3)):
        ratio = np.max(np.abs(b)) / np.max(np.abs(a))
        assert 0.7 * drop < ratio < 1.3 * drop


def test_pressure_gradient_is_invisible_to_leray(banded512):
    grid = banded512["grid"]
    b = compute_error_bundle(grid, banded512["w2"], banded512["wi"],
                             banded512["times"][1])
    gp = gradient(grid, b.pressure)
    assert np.max(np.abs(leray_project(grid, gp))) < 1e-10 * np.max(
        np.abs(gp))


def test_constant_amplitude_cancellation(still256):
    """Zero previous potential makes the geometric amplitudes constant,
    so the deviation bracket in the first part of E2 vanishes."""
    b = compute_error_bundle(still256["grid"], still256["w2"],
                             still256["wi"], 0.005)
    assert np.max(np.abs(b.e2a)) < 1e-12 * np.max(np.abs(b.e2b))


def test_empty_previous_level_closes_exactly(still256):
    """With nothing to absorb, the closure replacement drops out and the
    identity is pure trigonometric algebra."""
    rep = verify_decomposition(still256["grid"], still256["w2"],
                               still256["wi"], (0.0, 0.005, 0.01))
    assert rep.worst < 1e-10


def test_forcing_zero_previous_branch(banded512):
    grid = banded512["grid"]
    zero = np.zeros((2, grid.n, grid.n))
    f, g = compute_forcings(grid, banded512["w2"], banded512["wi"],
                            banded512["times"][1], zero, zero)
    assert np.array_equal(g, zero)
    assert np.max(np.abs(f)) > 0.0


def test_forcing_g_matches_stream_commutator(banded512):
    """For divergence-free v and B the advection commutator collapses to
    a perp gradient of the scalar cross product; both sides are exactly
    representable here, so the agreement is at rounding level."""
    grid = banded512["grid"]
    t = banded512["times"][1]
    b_prev = perp_gradient(grid, np.cos(3.0 * grid.x1) * np.sin(grid.x2))
    zero = np.zeros_like(b_prev)
    _, g = compute_forcings(grid, banded512["w2"], banded512["wi"], t,
                            zero, b_prev)
    v = banded512["w2"].flow(t) + banded512["wi"].flow(t)
    s = v[0] * b_prev[1] - v[1] * b_prev[0]
    expect = -perp_gradient(grid, s)
    assert np.max(np.abs(g - expect)) < 1e-12 * np.max(np.abs(g))
    means = np.abs(g.mean(axis=(1, 2)))
    assert np.max(means) < 1e-12 * np.max(np.abs(g))


def test_forcing_f_affine_in_previous_velocity(banded512):
    grid = banded512["grid"]
    t = banded512["times"][1]
    u_prev = perp_gradient(grid, np.sin(grid.x1) * np.cos(2.0 * grid.x2))
    zero = np.zeros_like(u_prev)
    f_u, _ = compute_forcings(grid, banded512["w2"], banded512["wi"], t,
                              u_prev, zero)
    f_0, _ = compute_forcings(grid, banded512["w2"], banded512["wi"], t,
                              zero, zero)
    wh = banded512["w2"].flow(t)
    wi = banded512["wi"].flow(t)
    v = wh + wi
    cross = np.stack([
        2.0 * v[0] * u_prev[0],
        v[0] * u_prev[1] + v[1] * u_prev[0],
        2.0 * v[1] * u_prev[1]])
    expect = tensor_divergence(grid, cross)
    diff = f_u - f_0 - expect
    assert np.max(np.abs(diff)) < 1e-12 * np.max(np.abs(f_u))
