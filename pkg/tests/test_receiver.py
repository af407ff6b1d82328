import math

import numpy as np
import pytest

from colosat.constellations import constellation_mi_single, named_constellation
from colosat.core import LinkConfig, PhaseNoiseSpec, seeded_rng
from colosat.receiver import (
    DetectorContext,
    EqualizerDiverged,
    EqualizerSpec,
    Scenario,
    app_posteriors,
    fs_mmse_equalize,
    front_end,
    mc_ir_estimate,
    multiuser_app,
    run_strategy_chain,
    GUARD,
)
from colosat.receiver import _regressors
from colosat.transponder import TransponderSpec, apply_transponder, modulate, shaping_pulse

QPSK = named_constellation("qpsk")


def symbols(n, c=QPSK, seed=0, stream="rx-test"):
    rng = seeded_rng(seed, stream)
    return c.array[rng.integers(0, c.size, n)]


def awgn(n, n0, seed=0):
    rng = seeded_rng(seed, "rx-noise")
    return math.sqrt(n0 / 2) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def two_sps(x, h, noise_std=0.0, seed=0):
    up = np.zeros(2 * len(x), complex)
    up[::2] = x
    y = np.convolve(up, h)
    if noise_std:
        y = y + awgn(len(y), noise_std**2, seed)
    return y


def test_equalizer_settings_validation():
    with pytest.raises(ValueError):
        EqualizerSpec(taps=20)
    with pytest.raises(ValueError):
        EqualizerSpec(algorithm="lms", step_or_forgetting=0.5)
    with pytest.raises(ValueError):
        EqualizerSpec(algorithm="rls", step_or_forgetting=0.8)
    with pytest.raises(ValueError):
        EqualizerSpec(taps=21, training_symbols=100)
    assert EqualizerSpec().parameter == 5e-4 and EqualizerSpec(algorithm="rls").parameter == 0.999
    with pytest.raises(ValueError):
        DetectorContext(n0=0.0)


def test_identity_channel():
    x = symbols(20_000)
    res = fs_mmse_equalize(two_sps(x, [1.0]), 0, x, EqualizerSpec(step_or_forgetting=5e-3))
    centre = len(res.taps) // 2
    assert abs(res.taps[centre] - 1) < 1e-2
    assert np.max(np.abs(np.delete(res.taps, centre))) < 1e-2
    assert res.mse < 1e-4


def test_unreliable_decisions_freeze_taps():
    x = symbols(20_000)
    decide = lambda z, k: QPSK.array[np.argmin(np.abs(z - QPSK.array))]  # noqa: E731
    clean = fs_mmse_equalize(two_sps(x, [1.0], noise_std=0.1), 0, x, EqualizerSpec(), decide)
    noisy = fs_mmse_equalize(two_sps(x, [1.0], noise_std=3.0), 0, x, EqualizerSpec(), decide)
    assert not clean.frozen and noisy.frozen
    # frozen taps equal the taps at the end of training
    short = fs_mmse_equalize(two_sps(x, [1.0], noise_std=3.0)[:2 * 2000 + 64], 0, x[:2000], EqualizerSpec(), decide)
    assert np.allclose(noisy.taps, short.taps)


MILD = np.array([0.02, -0.05, 0.1, 0.2, 1.0, 0.3, -0.1, 0.05, 0.03, -0.02, 0.01])
HARSH = np.array([0.05, -0.1, 0.2, 0.3, 1.0, 0.45, -0.2, 0.1, 0.05, -0.03, 0.02])


@pytest.mark.parametrize("algorithm, h", [("lms", MILD), ("rls", MILD), ("rls", HARSH)])
def test_linear_channel_near_wiener(algorithm, h):
    x = symbols(20_000)
    y = two_sps(x, h, noise_std=0.1)
    spec = EqualizerSpec(algorithm=algorithm)
    res = fs_mmse_equalize(y, 4, x, spec, decide=lambda z, k: QPSK.array[np.argmin(np.abs(z - QPSK.array))])
    # independent batch oracle by least squares on the same record
    u = _regressors(y, 4, len(x), spec.taps)[GUARD:-GUARD]
    d = x[GUARD:-GUARD]
    w, *_ = np.linalg.lstsq(u, d, rcond=None)
    oracle = np.mean(np.abs(d - u @ w) ** 2)
    assert res.wiener_mse == pytest.approx(oracle, rel=1e-9)
    assert 10 * np.log10(res.mse / oracle) < 1.0


def test_transponder_equalizer_beats_matched_filter():
    c = named_constellation("16psk")
    x = symbols(20_000, c)
    p = shaping_pulse()
    f = apply_transponder(modulate(x, p, 4), TransponderSpec(), 3.0)
    y2, first = front_end(f, p)
    raw = y2[first + 2 * np.arange(len(x))]
    body = slice(2000, None)
    g = np.vdot(x[body], raw[body]) / np.vdot(x[body], x[body])
    mf_mse = np.mean(np.abs(raw[body] / g - x[body]) ** 2)
    res = fs_mmse_equalize(y2, first, x, EqualizerSpec())
    assert res.mse < mf_mse


@pytest.mark.filterwarnings("ignore:overflow encountered:RuntimeWarning")
def test_divergence_detected():
    x = symbols(20_000)
    y = two_sps(x, [1.0], noise_std=0.05)
    with pytest.raises(EqualizerDiverged):
        fs_mmse_equalize(y * 30, 0, x, EqualizerSpec(step_or_forgetting=0.1))


def test_app_examples():
    ctx = DetectorContext(beta=0.9 * np.exp(0.1j), gamma=0.7, phi=0.4, n0=0.3)
    a = QPSK.array
    y = ctx.beta * (a[1] + ctx.gamma * np.exp(0.4j) * a[2])
    w = multiuser_app(y, a[:, None], a[None, :], ctx)
    assert np.unravel_index(np.argmax(w), w.shape) == (1, 2)
    by_hand = math.exp(-abs(y - ctx.beta * (a[0] + 0.7 * np.exp(0.4j) * a[3])) ** 2 / 0.3)
    assert w[0, 3] == pytest.approx(by_hand, rel=1e-12)
    flat = app_posteriors(y, QPSK, QPSK, DetectorContext(n0=1e12))
    assert np.allclose(flat, 1 / 16)


def test_posteriors_normalize(rng):
    c = named_constellation("16apsk")
    for _ in range(20):
        y = complex(*rng.normal(size=2)) * 3
        post = app_posteriors(y, c, c, DetectorContext(n0=1e-3), phi_k=rng.uniform(0, 6))
        assert abs(post.sum() - 1) < 1e-12 and np.all(post >= 0)


def test_estimator_matched_mismatched_and_null():
    snr = 1.0
    x = symbols(100_000)
    y = x + awgn(len(x), 1 / snr)
    matched = mc_ir_estimate(y, x, None, QPSK, None, DetectorContext(1.0, 1.0, 0.0, 1 / snr), "single")
    oracle = constellation_mi_single(QPSK, snr).bits
    assert abs(matched.bits - oracle) < 3 * matched.stderr
    for factor in (2.0, 0.5):
        mism = mc_ir_estimate(y, x, None, QPSK, None, DetectorContext(1.0, 1.0, 0.0, factor / snr), "single")
        assert mism.bits <= matched.bits
    # the receiver fits beta and n0; on an independent output beta is near zero
    z = awgn(len(x), 1.0, seed=5)
    beta = np.vdot(x, z) / np.vdot(x, x)
    ctx = DetectorContext(beta, 1.0, 0.0, float(np.mean(np.abs(z - beta * x) ** 2)))
    null = mc_ir_estimate(z, x, None, QPSK, None, ctx, "single")
    assert abs(null.bits) < 3 * null.stderr


def test_estimator_rate_of_convergence():
    x = symbols(80_000)
    y = x + awgn(len(x), 1.0)
    ctx = DetectorContext(1.0, 1.0, 0.0, 1.0)
    se1 = mc_ir_estimate(y[:40_000], x[:40_000], None, QPSK, None, ctx, "single").stderr
    se2 = mc_ir_estimate(y, x, None, QPSK, None, ctx, "single").stderr
    assert se1 / se2 == pytest.approx(math.sqrt(2), rel=0.2)


def test_joint_below_sum_of_conditionals():
    n = 30_000
    x1, x2 = symbols(n, seed=1), symbols(n, seed=2)
    phi = seeded_rng(3, "phi").uniform(0, 2 * np.pi, n)
    ctx = DetectorContext(1.0, 0.7, phi, 0.5)
    y = x1 + 0.7 * np.exp(1j * phi) * x2 + awgn(n, 0.5)
    ij = mc_ir_estimate(y, x1, x2, QPSK, QPSK, ctx, "joint")
    i1 = mc_ir_estimate(y, x1, x2, QPSK, QPSK, ctx, "conditional-1")
    i2 = mc_ir_estimate(y, x1, x2, QPSK, QPSK, ctx, "conditional-2")
    assert ij.bits <= i1.bits + i2.bits + 3 * math.sqrt(ij.stderr**2 + i1.stderr**2 + i2.stderr**2)


def test_estimator_requires_length_and_flags():
    x = symbols(10_000)
    with pytest.raises(ValueError):
        mc_ir_estimate(x[:100], x[:100], None, QPSK, None, DetectorContext(), "single")
    est = mc_ir_estimate(x + awgn(len(x), 1.0), x, None, QPSK, None, DetectorContext(), "single", tolerance=1e-6)
    assert est.flagged


def _link(snr_db, strategy, gamma_db=0.0):
    if strategy == "single":
        return LinkConfig.single_satellite(snr_db, seed=7)
    return LinkConfig.from_db(snr_db, gamma_db, phase_noise=PhaseNoiseSpec("random-walk", 0.0, 1e-3), seed=7)


def test_chain_deterministic():
    sc = Scenario("joint", "qpsk", _link(5.0, "joint"), n_symbols=12_500)
    a, b = run_strategy_chain(sc), run_strategy_chain(sc)
    assert a == b
    row = a.csv_row("qpsk", 0.0)
    assert row["strategy"] == "joint" and row["constellation"] == "qpsk" and row["seed"] == 7


def test_alamouti_linear_matches_theory():
    sc = Scenario("alamouti", "qpsk", _link(5.0, "alamouti", -6.0), n_symbols=20_000)
    r = run_strategy_chain(sc)
    gamma = 10 ** (-6 / 20)
    theory = constellation_mi_single(QPSK.normalized("average"), (1 + gamma**2) * 10 ** 0.5).bits
    assert r.rate.rate_bits == pytest.approx(theory, abs=0.02)
    assert r.pragmatic == r.rate


def test_low_snr_unbalanced_alternatives_beat_pragmatic():
    spec = TransponderSpec()
    res = {s: run_strategy_chain(Scenario(s, "qpsk", _link(0.0, s, -6.0), spec, n_symbols=20_000))
           for s in ("joint", "alamouti", "single")}
    jp = res["joint"].pragmatic
    for s in ("alamouti", "single"):
        p = res[s].pragmatic
        assert p.rate_bits > jp.rate_bits + 3 * math.hypot(p.stderr, jp.stderr)


def test_joint_beats_fdm_through_transponder():
    spec = TransponderSpec()
    j = run_strategy_chain(Scenario("joint", "16psk", _link(15.0, "joint"), spec, n_symbols=20_000))
    f = run_strategy_chain(Scenario("fdm", "16psk", _link(15.0, "fdm"), spec, n_symbols=20_000))
    assert j.rate.rate_bits > f.rate.rate_bits + 3 * math.hypot(j.rate.stderr, f.rate.stderr)
