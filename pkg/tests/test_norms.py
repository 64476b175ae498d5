"""Dyadic partition and Besov norm checks.

Frozen literals come from tools/oracles/oracle_norms.py, which builds the
same partition with dense complex transforms and independent masks.
"""

import numpy as np
import pytest

from mhdlab.fields import Grid, perp_gradient
from mhdlab.norms import (
    BesovSpec,
    PARTITION_VERSION,
    TimeSeriesNorm,
    besov_norm,
    block_profile,
    holder_cn_norm,
    lp_blocks,
    space_time_norm,
    write_norm_rows,
)


@pytest.fixture(scope="module")
def grid():
    return Grid(256)


def test_partition_sums_to_one(grid):
    part = lp_blocks(grid)
    total = sum(part.masks)
    assert np.max(np.abs(total - 1.0)) == 0.0


def test_partition_version_and_cache(grid):
    part = lp_blocks(grid)
    assert part.version == PARTITION_VERSION == "lp-gevrey-v1"
    assert lp_blocks(grid) is part


def test_low_block_is_exactly_the_mean(grid):
    part = lp_blocks(grid)
    f = 3.25 + np.cos(grid.x1) + 0.1 * np.cos(17.0 * grid.x2)
    low = grid.ifft(part.block(grid.fft(f), -1))
    assert np.max(np.abs(low - 3.25)) < 1e-13


def test_power_of_two_mode_lands_in_single_block(grid):
    part = lp_blocks(grid)
    f = np.cos(16.0 * grid.x1)
    fh = grid.fft(f)
    for idx, j in enumerate(part.js):
        blk = grid.ifft(fh * part.masks[idx])
        if j == 4:
            assert np.max(np.abs(blk - f)) < 1e-13
        else:
            assert np.max(np.abs(blk)) < 1e-13


def test_besov_norm_frozen_two_mode_sample(grid):
    # cos(8 x1) + 0.5 cos(96 x2): mode 8 sits in block 3; mode 96 splits
    # evenly between blocks 6 and 7 since ramp(3/2) = 1/2 exactly;
    # value 0.130859375 frozen by tools/oracles/oracle_norms.py
    f = np.cos(8.0 * grid.x1) + 0.5 * np.cos(96.0 * grid.x2)
    val = besov_norm(grid, f, BesovSpec(-1.0, np.inf, 1.0))
    assert val == pytest.approx(0.130859375, abs=1e-12)


def test_besov_norm_scaling_weight(grid):
    f = np.cos(16.0 * grid.x1)
    for s in (-2.0, -1.0, 0.0, 1.5):
        val = besov_norm(grid, f, BesovSpec(s, np.inf, 1.0))
        assert val == pytest.approx(2.0 ** (4 * s), rel=1e-12)


def test_besov_norm_l2_blocks(grid):
    # L^2 of cos is sqrt(2 pi^2); single-block mode at 2^4
    f = np.cos(16.0 * grid.x1)
    val = besov_norm(grid, f, BesovSpec(0.0, 2.0, 1.0))
    assert val == pytest.approx(np.sqrt(2.0) * np.pi, rel=1e-12)


def test_besov_vector_field_magnitude(grid):
    v = perp_gradient(grid, np.sin(16.0 * grid.x1) / 16.0)
    # |v| = |cos(16 x1)| pointwise (second component vanishes)
    val = besov_norm(grid, v, BesovSpec(0.0, np.inf, 1.0))
    assert val == pytest.approx(1.0, rel=1e-12)


def test_block_profile_rows(grid):
    f = np.cos(8.0 * grid.x1) + 0.5 * np.cos(96.0 * grid.x2)
    rows = dict(block_profile(grid, f))
    assert rows[3] == pytest.approx(1.0, abs=1e-12)
    assert rows[6] == pytest.approx(0.25, abs=1e-12)
    assert rows[7] == pytest.approx(0.25, abs=1e-12)
    assert rows[5] == pytest.approx(0.0, abs=1e-13)


def test_space_time_norm_plain_and_chemin_lerner(grid):
    f = np.cos(16.0 * grid.x1)
    times = np.linspace(0.0, 1.0, 11)
    series = [np.exp(-t) * f for t in times]
    spec = BesovSpec(-1.0, np.inf, 1.0)
    sup = space_time_norm(grid, times, series, TimeSeriesNorm(np.inf, spec))
    assert sup == pytest.approx(2.0 ** -4, rel=1e-12)
    l1 = space_time_norm(grid, times, series, TimeSeriesNorm(1.0, spec))
    assert l1 == pytest.approx(2.0 ** -4 * (1.0 - np.exp(-1.0)), rel=1e-3)
    # single-block signal: both orders of integration agree
    cl = space_time_norm(grid, times, series,
                         TimeSeriesNorm(1.0, spec, chemin_lerner=True))
    assert cl == pytest.approx(l1, rel=1e-12)


def test_chemin_lerner_bounds_plain_for_two_blocks(grid):
    # alternating two-block signal: the block-wise time norm dominates
    f1 = np.cos(8.0 * grid.x1)
    f2 = np.cos(16.0 * grid.x1)
    times = np.linspace(0.0, 1.0, 21)
    series = [np.cos(4 * t) ** 2 * f1 + np.sin(4 * t) ** 2 * f2
              for t in times]
    spec = BesovSpec(0.0, np.inf, 1.0)
    plain = space_time_norm(grid, times, series, TimeSeriesNorm(1.0, spec))
    cl = space_time_norm(grid, times, series,
                         TimeSeriesNorm(1.0, spec, chemin_lerner=True))
    assert cl >= plain - 1e-12


def test_holder_cn_norm(grid):
    f = np.cos(3.0 * grid.x1) * np.cos(4.0 * grid.x2)
    # order 0: 1; order 1: max(3, 4); order 2: max(9, 12, 16)
    assert holder_cn_norm(grid, f, 0) == pytest.approx(1.0, rel=1e-12)
    assert holder_cn_norm(grid, f, 1) == pytest.approx(5.0, rel=1e-12)
    assert holder_cn_norm(grid, f, 2) == pytest.approx(21.0, rel=1e-12)


def test_write_norm_rows(tmp_path):
    path = str(tmp_path / "norms.csv")
    write_norm_rows(path, [("sample", "0..8", 0.5)])
    lines = open(path).read().splitlines()
    assert lines[0] == "quantity,j_range,value,partition"
    assert lines[1] == "sample,0..8,0.5,lp-gevrey-v1"
