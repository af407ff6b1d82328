import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from colosat.strategies import (
    InconsistentRegionError,
    alamouti_channel,
    alamouti_decode,
    alamouti_precode,
    assemble_region,
)


def test_region_symmetric():
    r = assemble_region(1.0, 1.0, math.log2(3))
    assert r.E == pytest.approx((math.log2(3) / 2,) * 2)
    assert r.pragmatic_branch == "joint"


def test_region_single_better():
    r = assemble_region(1.0, 0.32193, 1.16993)
    assert r.pragmatic == pytest.approx(0.64386)
    assert r.single_better


def test_region_rectangle():
    r = assemble_region(2.0, 0.7, 2.7)
    assert r.E == pytest.approx((0.7, 0.7))
    assert r.B == pytest.approx((2.0, 0.7)) and r.C == pytest.approx((2.0, 0.7))


def test_region_rejects_inconsistent():
    with pytest.raises(InconsistentRegionError):
        assemble_region(1.0, 0.5, 2.0)
    with pytest.raises(InconsistentRegionError):
        assemble_region(1.0, 0.5, 0.8)


@given(st.floats(0.0, 5.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_region_points_inside(i1, f2, fj):
    i2 = f2 * i1
    ij = i1 + fj * i2
    r = assemble_region(i1, i2, ij)
    assert all(r.contains(p) for p in r.points.values())
    assert r.pragmatic == pytest.approx(min(ij, 2 * i2))


def test_precode_hand_example():
    pair = alamouti_precode([1 + 1j], [2])
    assert np.array_equal(pair.second_slot[0], [2])
    assert np.array_equal(pair.second_slot[1], [-1 + 1j])


def test_precode_symmetry_and_linearity(rng):
    x2 = np.array([1.0, 2.0, 3.0, 2.0, 1.0])
    assert np.array_equal(alamouti_precode(x2, x2).second_slot[0], x2)
    a = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    b = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    p, q = alamouti_precode(a, b), alamouti_precode(-a, -b)
    for u, v in zip(p.first_slot + p.second_slot, q.first_slot + q.second_slot):
        assert np.array_equal(u, -v)


@pytest.mark.parametrize("gamma, phi, tau", [(1.0, 0.0, 0), (0.5, 0.7, 3)])
def test_noiseless_recovery(gamma, phi, tau, rng):
    x1 = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    x2 = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    ya, yb = alamouti_channel(alamouti_precode(x1, x2), gamma, phi, tau)
    h1, h2 = alamouti_decode(ya, yb, gamma, phi, tau)
    norm = math.sqrt(1 + gamma**2)
    assert np.max(np.abs(h1 - norm * x1)) < 1e-12
    assert np.max(np.abs(h2 - norm * x2)) < 1e-12


@given(st.floats(0.5, 1.0), st.floats(0.0, 2 * math.pi), st.integers(0, 16), st.integers(0, 2**31))
def test_decode_inverts_precode(gamma, phi, tau, seed):
    r = np.random.default_rng(seed)
    x1 = r.standard_normal(32) + 1j * r.standard_normal(32)
    x2 = r.standard_normal(32) + 1j * r.standard_normal(32)
    h1, h2 = alamouti_decode(*alamouti_channel(alamouti_precode(x1, x2), gamma, phi, tau), gamma, phi, tau)
    norm = math.sqrt(1 + gamma**2)
    assert np.max(np.abs(h1 - norm * x1)) < 1e-12
    assert np.max(np.abs(h2 - norm * x2)) < 1e-12


def test_fractional_tau_rejected():
    pair = alamouti_precode(np.ones(4), np.ones(4))
    with pytest.raises(ValueError):
        alamouti_channel(pair, 1.0, 0.0, 1.5)
