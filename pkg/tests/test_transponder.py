import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from colosat.constellations import named_constellation
from colosat.core import seeded_rng
from colosat.transponder import (
    BAUD_RATE,
    FDM_BAUD_RATE,
    HpaSpec,
    TransponderSpec,
    WaveformFrame,
    amplitude_distribution,
    apply_transponder,
    combine_downlink,
    default_ibo,
    ergodic_rate_bound,
    fdm_compose,
    frequency_shift,
    load_transponder_spec,
    matched_filter,
    modulate,
    noise_variance,
    read_frame,
    rrc_taps,
    same_signal_matrix,
    sample_symbols,
    shaping_pulse,
    write_frame,
)


def qpsk(n, seed=0):
    rng = seeded_rng(seed, "test-symbols")
    return named_constellation("qpsk").array[rng.integers(0, 4, n)]


def test_rrc_shape():
    h = rrc_taps(0.1, 32, 4)
    assert len(h) == 129 and np.argmax(h) == 64
    assert np.allclose(h, h[::-1])
    assert np.sum(h**2) == pytest.approx(1.0)


def test_rrc_nyquist():
    h = rrc_taps(0.1, 32, 4)
    g = np.convolve(h, h[::-1])
    mid = len(g) // 2
    ticks = np.delete(g[mid % 4::4], mid // 4)
    # every individual tick below -50 dB; the summed ISI power is about -44 dB
    assert 20 * math.log10(np.max(np.abs(ticks)) / g[mid]) < -50
    assert 10 * math.log10(np.sum(ticks**2) / g[mid] ** 2) < -40


def test_rrc_unit_rolloff_cascade_is_raised_cosine():
    sps = 8
    h = rrc_taps(1.0, 16, sps, taper=0.0)
    g = np.convolve(h, h[::-1])
    mid = len(g) // 2
    t = (np.arange(len(g)) - mid) / sps
    with np.errstate(divide="ignore", invalid="ignore"):
        rc = np.sinc(t) * np.cos(np.pi * t) / (1 - 4 * t**2)
    rc[np.isclose(np.abs(t), 0.5)] = np.pi / 4 * np.sinc(0.5)
    near = np.abs(t) <= 4
    assert np.max(np.abs(g[near] / g[mid] - rc[near])) < 1e-3


def test_rrc_rejects_bad_rolloff():
    with pytest.raises(ValueError):
        rrc_taps(0.0, 32, 4)


def test_modulate_examples():
    p = shaping_pulse()
    one = modulate([1.0], p, 4)
    assert np.allclose(one.samples[: len(p)], p) and not np.any(one.samples[len(p):])
    assert not np.any(modulate(np.zeros(10), p, 4).samples)
    two = modulate([1.0, 1.0], p, 4)
    ref = np.zeros(len(two), complex)
    ref[: len(p)] += p
    ref[4:4 + len(p)] += p
    assert np.allclose(two.samples, ref)


def test_modulate_power_and_matched_filter():
    x = qpsk(4000)
    p = shaping_pulse()
    f = modulate(x, p, 4)
    body = f.samples[len(p):-len(p)]
    assert np.mean(np.abs(body) ** 2) == pytest.approx(np.sum(p**2) / 4, rel=0.01)
    y = sample_symbols(matched_filter(f, p), len(x))
    assert 10 * np.log10(np.mean(np.abs(y - x) ** 2)) < -40


def test_saleh_normalization():
    hpa = HpaSpec()
    r = np.linspace(0.01, 3, 300)
    assert hpa.am_am(1.0) == pytest.approx(1.0)
    assert r[np.argmax(hpa.am_am(r))] == pytest.approx(1.0, abs=0.01)
    assert np.degrees(hpa.am_pm(1.0)) == pytest.approx(22.4, abs=0.1)


def test_constant_envelope_at_saturation():
    hpa = HpaSpec()
    x = np.exp(1j * np.linspace(0, 6, 100))
    y = hpa(x)
    assert np.allclose(np.abs(y), 1.0)
    assert np.allclose(np.angle(y / x), hpa.am_pm(1.0))


def test_lookup_table_no_extrapolation():
    hpa = HpaSpec("lookup-table", table=((-20, -20, 0), (-10, -10.2, 5), (0, -0.5, 30)))
    assert hpa.am_am(10 ** (-15 / 20)) < 1
    with pytest.raises(ValueError):
        hpa.am_am(10 ** (1 / 20))


def _psk_frame(n=20_000, name="16psk"):
    rng = seeded_rng(3, "frame")
    c = named_constellation(name).array
    return modulate(c[rng.integers(0, len(c), n)], shaping_pulse(), 4)


def test_backed_off_chain_is_linear():
    spec = TransponderSpec()
    f = _psk_frame(5000)
    lin = spec.omux.apply(spec.imux.apply(f)).samples
    out = apply_transponder(f, spec, ibo_db=40.0).samples
    rho = abs(np.vdot(lin, out)) / (np.linalg.norm(lin) * np.linalg.norm(out))
    assert rho > 0.999


def _out_of_band(x, fs, edge):
    spec = np.abs(np.fft.fft(x)) ** 2
    f = np.fft.fftfreq(len(x), 1 / fs)
    return spec[np.abs(f) > edge].sum() / spec.sum()


def test_omux_reduces_regrowth():
    spec = TransponderSpec()
    f = _psk_frame()
    x = spec.imux.apply(f)
    hpa_out = spec.hpa(x.samples * math.sqrt(10 ** (-0.3) / x.power))
    out = apply_transponder(f, spec, ibo_db=3.0)
    edge = 19e6
    assert _out_of_band(out.samples, f.sample_rate, edge) < _out_of_band(hpa_out, f.sample_rate, edge)


def test_transponder_deterministic_and_sps_guard():
    spec = TransponderSpec()
    f = _psk_frame(3000)
    assert np.array_equal(apply_transponder(f, spec).samples, apply_transponder(f, spec).samples)
    with pytest.raises(ValueError):
        apply_transponder(WaveformFrame(np.ones(20), 2), spec)


def test_default_ibo():
    assert default_ibo("qpsk") == default_ibo("8psk") == 0.0
    assert default_ibo("16apsk") == default_ibo("32psk") == 3.0


def test_combine_noiseless():
    f = _psk_frame(1000)
    assert np.array_equal(combine_downlink(f, None, 0.0).samples, f.samples)
    assert np.allclose(combine_downlink(f, f, 1.0).samples, 2 * f.samples)


def test_noise_power_calibration():
    f = WaveformFrame(np.zeros(1_000_000), 4)
    y = combine_downlink(f, None, 0.0, snr=2.0, rng=seeded_rng(0, "noise"))
    assert np.mean(np.abs(y.samples) ** 2) == pytest.approx(noise_variance(f, 2.0), rel=0.01)
    assert noise_variance(f, 2.0) == pytest.approx(0.5 * f.sample_rate / BAUD_RATE)


def _fdm_pair(n=4000, sps=8):
    p = shaping_pulse(sps=sps)
    s1 = modulate(qpsk(n, 1), p, sps, FDM_BAUD_RATE)
    s2 = modulate(qpsk(n, 2), p, sps, FDM_BAUD_RATE)
    return p, s1, s2


def _branch(y, p, fc, sign, n):
    return sample_symbols(matched_filter(frequency_shift(y, -sign * fc / 2), p), n)


def test_fdm_linear_orthogonal_and_additive():
    fc = 1.1 * FDM_BAUD_RATE
    p, s1, s2 = _fdm_pair()
    silent = s2.with_samples(np.zeros(len(s2), complex))
    y, b1, b2 = fdm_compose(s1, silent, fc)
    r1 = _branch(y, p, fc, +1, 4000)
    r2 = _branch(y, p, fc, -1, 4000)
    assert 10 * np.log10(np.mean(np.abs(r2) ** 2) / np.mean(np.abs(r1) ** 2)) < -50
    y, b1, b2 = fdm_compose(s1, s2, fc)
    assert y.power == pytest.approx(b1.power + b2.power, rel=0.01)


def test_fdm_transponder_leaks():
    fc = 1.1 * FDM_BAUD_RATE
    p, s1, s2 = _fdm_pair()
    silent = s2.with_samples(np.zeros(len(s2), complex))
    y, _, _ = fdm_compose(s1, silent, fc, transponder=TransponderSpec(), ibo_db=0.0)
    r1 = _branch(y, p, fc, +1, 4000)
    r2 = _branch(y, p, fc, -1, 4000)
    assert 10 * np.log10(np.mean(np.abs(r2) ** 2) / np.mean(np.abs(r1) ** 2)) > -50


def test_fdm_branch_noise_is_half():
    fc = 1.1 * FDM_BAUD_RATE
    p, s1, s2 = _fdm_pair(20_000)
    snr = 10.0
    y, _, _ = fdm_compose(s1, s2, fc, gamma=0.5, snr=snr, rng=seeded_rng(0, "fdm-noise"))
    r1 = _branch(y, p, fc, +1, 20_000)
    r2 = _branch(y, p, fc, -1, 20_000)
    assert np.var(r1 - qpsk(20_000, 1)) == pytest.approx(0.5 / snr, rel=0.03)
    assert np.var(r2 - 0.5 * qpsk(20_000, 2)) == pytest.approx(0.5 / snr, rel=0.03)


def test_fdm_alias_check():
    p, s1, s2 = _fdm_pair(100, sps=2)
    with pytest.raises(ValueError):
        fdm_compose(s1, s2, 1.1 * FDM_BAUD_RATE)


def test_amplitude_rayleigh_oracle():
    rng = seeded_rng(0, "gauss")
    g = (rng.standard_normal(200_000) + 1j * rng.standard_normal(200_000)) * 3.0
    assert amplitude_distribution(g).ks_rayleigh < 0.01


def test_two_signals_closer_to_gaussian():
    one = _psk_frame(30_000).samples
    rng = seeded_rng(9, "other")
    c = named_constellation("16psk").array
    other = modulate(c[rng.integers(0, 16, 30_000)], shaping_pulse(), 4).samples
    two = one + np.exp(0.3j) * other
    assert amplitude_distribution(two).ks_rayleigh < amplitude_distribution(one).ks_rayleigh


def test_constant_envelope_spike():
    d = amplitude_distribution(np.exp(1j * np.linspace(0, 100, 100_000)))
    assert np.count_nonzero(d.pdf) == 1
    with pytest.raises(ValueError):
        amplitude_distribution(np.ones(10))


def test_same_signal_matrix_examples():
    assert np.allclose(same_signal_matrix(64, 0.0, 0.3, 0.1), np.eye(64))
    assert np.allclose(same_signal_matrix(64, 1.0, 0.0, 0.0), 2 * np.eye(64))
    rng = seeded_rng(0, "ssm")
    h = same_signal_matrix(1024, 0.5, rng.uniform(), rng.uniform(0, 2 * np.pi, 1024))
    assert abs(np.trace(h.conj().T @ h).real / 1024 - 1.25) < 1e-2


@settings(max_examples=10)
@given(st.floats(0.5, 1.0), st.floats(0.0, 1.0), st.integers(0, 1000))
def test_spectral_radius(gamma, tau, seed):
    ph = np.random.default_rng(seed).uniform(0, 2 * np.pi, 64)
    h = same_signal_matrix(64, gamma, tau, ph)
    assert np.max(np.abs(np.linalg.eigvals(h))) <= 1 + gamma + 1e-9


def test_ergodic_examples():
    rate, bound = ergodic_rate_bound(2 * np.eye(64), 10.0, 1.0)
    assert rate == pytest.approx(math.log2(41)) and rate > bound
    rate, bound = ergodic_rate_bound(same_signal_matrix(64, 0.0, 0.2, 0.0), 10.0, 0.0)
    assert rate == pytest.approx(bound)


def test_frame_dump_round_trip(tmp_path):
    f = _psk_frame(100)
    write_frame(f, tmp_path / "f.bin")
    raw = (tmp_path / "f.bin").read_bytes()
    assert len(raw) == 32 + 16 * len(f)
    g = read_frame(tmp_path / "f.bin")
    assert np.array_equal(g.samples, f.samples) and g.samples_per_symbol == 4 and g.baud_rate == BAUD_RATE


def test_transponder_file_with_table(tmp_path):
    (tmp_path / "amp.txt").write_text("# in out phase\n-20 -20 0\n-10 -10.3 4\n0 -1 25\n6 0 40\n")
    (tmp_path / "t.ini").write_text(
        "[imux]\nbandwidth_3db_mhz = 44\n[hpa]\nmodel = lookup-table\ntable_file = amp.txt\nibo_db = 1\n"
        "[omux]\nbandwidth_3db_mhz = 38\n")
    spec = load_transponder_spec(tmp_path / "t.ini")
    assert spec.hpa.model == "lookup-table" and spec.ibo_db == 1.0
    assert len(spec.hpa.table) == 4
    (tmp_path / "t.ini").write_text((tmp_path / "t.ini").read_text().replace("amp.txt", "gone.txt"))
    with pytest.raises(FileNotFoundError, match="gone.txt"):
        load_transponder_spec(tmp_path / "t.ini")


def test_shipped_transponder_defaults():
    spec = load_transponder_spec()
    assert spec.hpa.params == (2.0, 1.0, 3.476, 7.905)
    h = spec.omux.taps(4 * BAUD_RATE)
    resp = np.abs(np.fft.fft(h, 8192)) ** 2
    f = np.fft.fftfreq(8192, 1 / (4 * BAUD_RATE))
    at = resp[np.argmin(np.abs(f - 19e6))] / resp[0]
    assert 10 * np.log10(at) == pytest.approx(-3.0, abs=0.5)
