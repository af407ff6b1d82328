import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from colosat.analytic_awgn import (
    awgn_alamouti,
    awgn_fdm,
    awgn_fdm_pragmatic,
    awgn_joint,
    awgn_joint_pragmatic,
    awgn_rates,
    awgn_region,
)

GRID = 10 ** (np.arange(-10.0, 25.01, 0.5) / 10)


def test_joint_examples():
    assert awgn_joint(1.0, 1.0) == pytest.approx(math.log2(3), abs=1e-15)
    assert awgn_joint(1.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert awgn_joint(1.0, 0.5) == pytest.approx(math.log2(2.25), abs=1e-15)


def test_fdm_examples():
    assert awgn_fdm(1.0, 1.0) == pytest.approx(math.log2(3), abs=1e-15)
    assert awgn_fdm(1.0, 0.5) == pytest.approx(0.5 * math.log2(3) + 0.5 * math.log2(1.5), abs=1e-15)
    assert awgn_fdm(0.001, 1.0) == pytest.approx(0.00288, abs=1e-5)


def test_pragmatic_examples():
    v, branch = awgn_joint_pragmatic(1.0, 0.5, return_branch=True)
    assert v == pytest.approx(2 * math.log2(1.25)) and branch == "2i2"
    v, branch = awgn_joint_pragmatic(100.0, 0.5, return_branch=True)
    # 1 + (1 + 0.25) * 100 = 126; the 2 I2 branch is 2 log2(26) = 9.40
    assert v == pytest.approx(math.log2(126)) and branch == "joint"
    assert awgn_joint_pragmatic(1.0, 1.0) == pytest.approx(math.log2(3))
    assert awgn_fdm_pragmatic(1.0, 1.0) == pytest.approx(math.log2(3))
    assert awgn_fdm_pragmatic(1.0, 0.5) == pytest.approx(math.log2(1.5))
    assert awgn_fdm_pragmatic(10.0, 0.5) == pytest.approx(math.log2(6))


def test_alamouti_equals_joint():
    for g in (0.5, 0.7, 1.0):
        assert np.array_equal(awgn_alamouti(GRID, g), awgn_joint(GRID, g))


def test_region_examples():
    r = awgn_region(1.0, 1.0)
    assert r.i1 == r.i2 == pytest.approx(1.0)
    assert r.E == pytest.approx((math.log2(3) / 2,) * 2)
    r = awgn_region(1.0, 0.5)
    assert r.i2 == pytest.approx(0.32193, abs=1e-5)
    assert r.E == pytest.approx((0.32193, 0.32193), abs=1e-5)
    assert r.single_better and r.pragmatic == pytest.approx(0.64386, abs=1e-5)


def test_theorem_one_on_grid():
    for g in (1.0, 0.5):
        dj = awgn_joint(GRID, g) - awgn_fdm(GRID, g)
        dp = awgn_joint_pragmatic(GRID, g) - awgn_fdm_pragmatic(GRID, g)
        if g == 1.0:
            assert np.max(np.abs(dj)) < 1e-12 and np.max(np.abs(dp)) < 1e-12
        else:
            assert np.all(dj > 0) and np.all(dp > 0)


def test_pragmatic_branch_switches_once():
    _, branch = awgn_joint_pragmatic(GRID, 0.5, return_branch=True)
    changes = np.flatnonzero(branch[1:] != branch[:-1])
    assert len(changes) == 1
    assert branch[0] == "2i2" and branch[-1] == "joint"


@given(st.floats(-10, 25), st.floats(0.5, 1.0))
def test_region_consistency(snr_db, gamma):
    r = awgn_region(10 ** (snr_db / 10), gamma)
    for p in r.points.values():
        assert r.contains(p)
    assert sum(r.B) == pytest.approx(r.i_joint) and sum(r.C) == pytest.approx(r.i_joint)
    if 2 * r.i2 >= r.i_joint:
        assert r.B[0] - 1e-12 <= r.E[0] <= r.C[0] + 1e-12
    else:
        assert sum(r.E) < r.i_joint


@given(st.floats(-10, 25), st.floats(0.5, 1.0))
def test_rates_ordering(snr_db, gamma):
    r = awgn_rates(10 ** (snr_db / 10), gamma)
    assert r.i_joint >= r.i_fdm - 1e-12
    assert r.i_joint_pragmatic >= r.i_fdm_pragmatic - 1e-12
    assert r.i_alamouti == r.i_joint
    assert r.i_joint >= r.i_single
