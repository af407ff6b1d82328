"""Adaptive receiver and simulation-based information rates.

The front end matched-filters the received waveform and keeps two samples
per symbol. A fractionally spaced MMSE equalizer (LMS or RLS, trained on
known symbols, then decision directed) produces one sample per symbol, and a
memoryless Gaussian law at its output serves as the auxiliary channel of
the rate estimate

    I >= (1/n) sum_k log2 q(y_k | x_k) / q(y_k),

which is a lower bound on the information rate for any choice of ``q``.
Residual ISI and nonlinear distortion count as noise.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .constellations import Constellation, named_constellation
from .core import LinkConfig, RatePoint, seeded_rng
from .transponder import (BAUD_RATE, FDM_BAUD_RATE, ROLLOFF, TRANSPONDER_SPS, TransponderSpec,
                          WaveformFrame, apply_transponder, awgn, combine_downlink, default_ibo,
                          fdm_compose, frequency_shift, matched_filter, modulate, noise_variance,
                          shaping_pulse)

log = logging.getLogger(__name__)

LOG2E = 1.0 / math.log(2.0)
MODES = ("joint", "conditional-1", "conditional-2", "single")
# symbols discarded at both frame edges (filter transients)
GUARD = 64
# decision error rate over the last training window above which the taps are
# frozen after training instead of following unreliable decisions
DD_MAX_ERROR_RATE = 0.05


class EqualizerDiverged(RuntimeError):
    pass


@dataclass(frozen=True)
class EqualizerSpec:
    """Fractionally spaced (T/2) adaptive equalizer settings.

    ``step_or_forgetting`` is the LMS step size or the RLS forgetting factor;
    ``None`` selects 5e-4 or 0.999.
    """

    taps: int = 21
    algorithm: str = "lms"
    step_or_forgetting: float | None = None
    training_symbols: int = 2000
    decision_directed: bool = True
    window: int = 500

    def __post_init__(self):
        if self.taps < 1 or self.taps % 2 == 0:
            raise ValueError("equalizer length must be odd")
        if self.algorithm not in ("lms", "rls"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        v = self.parameter
        if self.algorithm == "lms" and not 0 < v <= 0.1:
            raise ValueError("LMS step must lie in (0, 0.1]")
        if self.algorithm == "rls" and not 0.9 < v <= 1.0:
            raise ValueError("RLS forgetting factor must lie in (0.9, 1]")
        if self.training_symbols < 10 * self.taps:
            raise ValueError("training must cover at least 10 symbols per tap")

    @property
    def parameter(self) -> float:
        if self.step_or_forgetting is not None:
            return float(self.step_or_forgetting)
        return 5e-4 if self.algorithm == "lms" else 0.999


@dataclass(frozen=True)
class DetectorContext:
    """Auxiliary-channel law ``y_k ~ CN(beta (x1 + gamma e^{j phi_k} x2), n0)``."""

    beta: complex = 1.0
    gamma: float = 1.0
    phi: np.ndarray | float = 0.0
    n0: float = 1.0

    def __post_init__(self):
        if not self.n0 > 0:
            raise ValueError("n0 must be positive")


@dataclass(frozen=True)
class EqualizerResult:
    outputs: np.ndarray
    taps: np.ndarray
    mse: float
    wiener_mse: float
    beta: complex
    n0: float
    frozen: bool = False


@dataclass(frozen=True)
class IREstimate:
    bits: float
    stderr: float
    flagged: bool = False


# -- front end and equalizer --------------------------------------------------------


def front_end(frame: WaveformFrame, pulse) -> tuple[np.ndarray, int]:
    """Matched filter and decimation to 2 samples/symbol.

    Returns the T/2-spaced samples and the index of the first symbol peak.
    """
    sps = frame.samples_per_symbol
    if sps % 2:
        raise ValueError("front end needs an even number of samples per symbol")
    mf = matched_filter(frame, pulse)
    step = sps // 2
    first = mf.start % step
    y2 = mf.samples[first::step]
    return y2, (mf.start - first) // step


def _regressors(y2, first, n_symbols, taps):
    half = taps // 2
    pad = np.concatenate([np.zeros(half, complex), y2, np.zeros(half + 2 * n_symbols, complex)])
    idx = first + 2 * np.arange(n_symbols)[:, None] + np.arange(taps)[None, :]
    return pad[idx]


def wiener_taps(u, d):
    """Batch MMSE taps ``R^{-1} p`` and the resulting MSE on the same record."""
    r = u.T @ u.conj() / len(d)
    p = u.T @ d.conj() / len(d)
    w = np.linalg.solve(r + 1e-12 * np.eye(len(r)), p)
    e = d - u @ w.conj()
    return w, float(np.mean(np.abs(e) ** 2))


def fs_mmse_equalize(y2, first: int, desired, spec: EqualizerSpec = EqualizerSpec(),
                     decide=None) -> EqualizerResult:
    """Adapt a T/2-spaced equalizer and return its symbol-rate outputs.

    Parameters
    ----------
    y2 : array
        Front-end samples at two per symbol.
    first : int
        Index of the first symbol peak in ``y2``.
    desired : array
        Reference sequence ``d_k``; the first ``training_symbols`` entries
        drive the adaptation, later ones are used only for the residual MSE
        unless decisions are disabled.
    decide : callable, optional
        ``decide(z, k)`` maps output ``z`` of symbol ``k`` to the nearest
        reference point; required for decision-directed operation.

    Decisions are checked against the reference over the last training
    window; when more than ``DD_MAX_ERROR_RATE`` of them are wrong the taps
    are frozen after training (``frozen`` in the result).
    """
    d = np.asarray(desired, dtype=complex)
    n = len(d)
    if n < spec.training_symbols:
        raise ValueError("record shorter than the training sequence")
    u = _regressors(np.asarray(y2), first, n, spec.taps)
    w = np.zeros(spec.taps, complex)
    w[spec.taps // 2] = 1.0
    out = np.empty(n, complex)
    mu = lam = spec.parameter
    if spec.algorithm == "rls":
        pinv = np.eye(spec.taps, dtype=complex) * 100.0
    use_dd = spec.decision_directed and decide is not None
    frozen = False
    check_from = spec.training_symbols - min(spec.window, spec.training_symbols)
    wrong = 0
    win_mse, acc, count = [], 0.0, 0
    for k in range(n):
        x = u[k]
        z = np.vdot(w, x)
        out[k] = z
        if use_dd and check_from <= k < spec.training_symbols:
            wrong += abs(decide(z, k) - d[k]) > 1e-9
            if k == spec.training_symbols - 1:
                frozen = wrong > DD_MAX_ERROR_RATE * (spec.training_symbols - check_from)
        ref = d[k] if (k < spec.training_symbols or not use_dd) else decide(z, k)
        e = ref - z
        if not (frozen and k >= spec.training_symbols):
            if spec.algorithm == "lms":
                w += mu * x * np.conj(e)
            else:
                px = pinv @ x
                g = px / (lam + np.vdot(x, px).real)
                w += g * np.conj(e)
                pinv = (pinv - np.outer(g, x.conj() @ pinv)) / lam
        if not np.isfinite(z):
            raise EqualizerDiverged(f"equalizer output overflowed at symbol {k + 1}")
        acc += abs(d[k] - z) ** 2
        count += 1
        if count == spec.window:
            win_mse.append(acc / count)
            acc, count = 0.0, 0
            if len(win_mse) >= 4 and all(win_mse[-i] > 1.25 * win_mse[-i - 1] for i in (1, 2, 3)):
                raise EqualizerDiverged(
                    f"equalizer MSE grew over 3 consecutive windows: "
                    + ", ".join(f"{m:.3g}" for m in win_mse[-4:]) + f" at symbol {k + 1}")
    body = slice(min(spec.training_symbols, n - 1), n)
    _, wmse = wiener_taps(u[GUARD:n - GUARD], d[GUARD:n - GUARD])
    beta = complex(np.vdot(d[body], out[body]) / np.vdot(d[body], d[body]))
    n0 = float(np.mean(np.abs(out[body] - beta * d[body]) ** 2))
    mse = float(np.mean(np.abs(out[body] - d[body]) ** 2))
    return EqualizerResult(out, w, mse, wmse, beta, max(n0, 1e-12), frozen)


# -- detector and rate estimate -------------------------------------------------------


def _alphabet(c):
    if isinstance(c, Constellation):
        return c.array, c.weights
    pts = np.asarray(c, dtype=complex)
    return pts, np.full(len(pts), 1.0 / len(pts))


def multiuser_app(y, x1, x2, ctx: DetectorContext, log_domain: bool = False):
    """``exp(-|y - beta (x1 + gamma e^{j phi} x2)|^2 / n0)`` (or its log)."""
    mean = ctx.beta * (np.asarray(x1) + ctx.gamma * np.exp(1j * np.asarray(ctx.phi)) * np.asarray(x2))
    lw = -np.abs(np.asarray(y) - mean) ** 2 / ctx.n0
    return lw if log_domain else np.exp(lw)


def app_posteriors(y_k, c1, c2, ctx: DetectorContext, phi_k: float = 0.0) -> np.ndarray:
    """Normalized joint posteriors over the ``|c1| x |c2|`` hypotheses of one sample."""
    a1, q1 = _alphabet(c1)
    a2, q2 = _alphabet(c2)
    c = DetectorContext(ctx.beta, ctx.gamma, phi_k, ctx.n0)
    lw = multiuser_app(y_k, a1[:, None], a2[None, :], c, log_domain=True)
    lw = lw + np.log(q1)[:, None] + np.log(q2)[None, :]
    return np.exp(lw - logsumexp(lw))


def mc_ir_estimate(y, x1, x2, c1, c2, ctx: DetectorContext, mode: str = "joint",
                   tolerance: float | None = None, min_symbols: int = 10_000,
                   chunk: int = 1 << 20) -> IREstimate:
    """Auxiliary-channel rate estimate in bits per symbol.

    ``mode``: ``joint`` gives ``I(x1, x2; y)``, ``conditional-1`` gives
    ``I(x1; y | x2)``, ``conditional-2`` gives ``I(x2; y | x1)``. ``single``
    uses ``x1`` over ``c1`` with law ``y ~ CN(beta gamma e^{j phi} x1, n0)``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    y = np.asarray(y, dtype=complex)
    n = len(y)
    if n < min_symbols:
        raise ValueError(f"need at least {min_symbols} symbols, got {n}")
    rot = ctx.gamma * np.exp(1j * np.broadcast_to(np.asarray(ctx.phi, dtype=float), (n,)))
    b, n0 = ctx.beta, ctx.n0
    a1, q1 = _alphabet(c1)
    if mode == "single":
        mean_true = b * rot * np.asarray(x1)
        hyp = b * rot[:, None] * a1[None, :]
        lq = np.log(q1)
    else:
        a2, q2 = _alphabet(c2)
        x1 = np.asarray(x1)
        x2 = np.asarray(x2)
        mean_true = b * (x1 + rot * x2)
        if mode == "joint":
            lq = (np.log(q1)[:, None] + np.log(q2)[None, :]).ravel()
        elif mode == "conditional-1":
            lq = np.log(q1)
        else:
            lq = np.log(q2)
    num = -np.abs(y - mean_true) ** 2 / n0
    den = np.empty(n)
    k = len(lq)
    step = max(1, chunk // k)
    for s in range(0, n, step):
        sl = slice(s, s + step)
        if mode == "single":
            h = hyp[sl]
        elif mode == "joint":
            h = b * (a1[None, :, None] + rot[sl, None, None] * a2[None, None, :]).reshape(-1, k)
        elif mode == "conditional-1":
            h = b * (a1[None, :] + (rot[sl] * x2[sl])[:, None])
        else:
            h = b * (x1[sl][:, None] + rot[sl, None] * a2[None, :])
        den[sl] = logsumexp(lq - np.abs(y[sl, None] - h) ** 2 / n0, axis=1)
    samples = (num - den) * LOG2E
    mean = math.fsum(samples) / n
    se = float(np.std(samples, ddof=1) / math.sqrt(n))
    flagged = tolerance is not None and se > tolerance
    if flagged:
        log.warning("rate estimate standard error %.3g exceeds tolerance %.3g", se, tolerance)
    return IREstimate(mean, se, flagged)


# -- strategy chains ---------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    strategy: str
    constellation: str
    link: LinkConfig
    transponder: TransponderSpec | None = None
    equalizer: EqualizerSpec = field(default_factory=EqualizerSpec)
    n_symbols: int = 100_000
    ibo_db: float | None = None
    alamouti_block: int = 1024

    def __post_init__(self):
        if self.alamouti_block < 64:
            raise ValueError("alamouti_block must be at least 64 symbols")
        if self.strategy not in ("joint", "fdm", "alamouti", "single"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.n_symbols < self.equalizer.training_symbols + 10_000 + 2 * GUARD:
            raise ValueError("n_symbols must exceed training + 1e4 symbols + guards")


@dataclass(frozen=True)
class ChainResult:
    """Rates in bits/s/Hz (``TW = 1`` over the full transponder band)."""

    strategy: str
    rate: RatePoint
    pragmatic: RatePoint
    per_satellite: tuple
    equalizer_mse: tuple
    n_symbols: int
    seed: int

    def csv_row(self, constellation: str, gamma_db: float) -> dict:
        return dict(strategy=self.strategy, constellation=constellation, gamma_db=gamma_db,
                    psat_over_n_db=self.rate.snr_db, se_bits=self.rate.rate_bits,
                    stderr=self.rate.stderr, seed=self.seed, n_symbols=self.n_symbols)


def _symbols(c, n, rng):
    return c.array[rng.choice(c.size, size=n, p=c.weights)]


def _nearest(points):
    pts = np.asarray(points)
    return lambda z, k: pts[np.argmin(np.abs(pts - z))]


def _nearest_rotated(a1, a2, gain, phi_k):
    """Decisions on ``a1 + gain e^{j phi_k} a2`` (``a1`` may be ``[0]``)."""
    a1 = np.asarray(a1)[:, None]
    a2 = np.asarray(a2)[None, :]

    def decide(z, k):
        cand = (a1 + gain * np.exp(1j * phi_k[k]) * a2).ravel()
        return cand[np.argmin(np.abs(cand - z))]

    return decide


def _through(frame, sc, ibo):
    return frame if sc.transponder is None else apply_transponder(frame, sc.transponder, ibo)


def run_strategy_chain(sc: Scenario) -> ChainResult:
    """Simulate one strategy end to end and estimate its spectral efficiency.

    The SNR of ``sc.link`` is ``P_sat / N`` with ``N`` measured in the full
    37 MHz band (the linear-channel runs use the symbol power instead of the
    amplifier saturation power, both normalized to 1).
    """
    c = named_constellation(sc.constellation).normalized("peak")
    if sc.transponder is None:
        c = c.normalized("average")
    ibo = default_ibo(sc.constellation) if sc.ibo_db is None else sc.ibo_db
    link = sc.link
    snr = link.snr
    n = sc.n_symbols
    tag = f"{sc.strategy}:{sc.constellation}:{link.snr_db!r}:{link.gamma!r}"
    rng_sym = seeded_rng(link.seed, "symbols:" + tag)
    rng_noise = seeded_rng(link.seed, "noise:" + tag)
    rng_phase = seeded_rng(link.seed, "phase:" + tag)
    gamma = link.gamma
    x1 = _symbols(c, n, rng_sym)
    x2 = _symbols(c, n, rng_sym)

    if sc.strategy == "single":
        p = shaping_pulse(ROLLOFF, 32, TRANSPONDER_SPS)
        s1 = _through(modulate(x1, p, TRANSPONDER_SPS, BAUD_RATE), sc, ibo)
        y = combine_downlink(s1, None, 0.0, snr=snr, rng=rng_noise)
        y2, first = front_end(y, p)
        res = fs_mmse_equalize(y2, first, x1, sc.equalizer, _nearest(c.array))
        body = slice(sc.equalizer.training_symbols, n - GUARD)
        ctx = DetectorContext(res.beta, 1.0, 0.0, res.n0)
        est = mc_ir_estimate(res.outputs[body], x1[body], None, c, None, ctx, "single")
        pt = RatePoint(link.snr_db, max(est.bits, 0.0), est.stderr)
        return ChainResult("single", pt, pt, (pt,), (res.mse,), n, link.seed)

    if sc.strategy == "joint":
        p = shaping_pulse(ROLLOFF, 32, TRANSPONDER_SPS)
        s1 = _through(modulate(x1, p, TRANSPONDER_SPS, BAUD_RATE), sc, ibo)
        s2 = _through(modulate(x2, p, TRANSPONDER_SPS, BAUD_RATE), sc, ibo)
        phi = link.phase_noise.realize(len(s1) // TRANSPONDER_SPS, rng_phase)
        y = combine_downlink(s1, s2, gamma, phi, link.tau_samples, snr, rng_noise)
        y2, first = front_end(y, p)
        # symbol k peaks at sample start + k sps; its phase is that of that sample
        phi_k = np.repeat(phi, TRANSPONDER_SPS)[np.minimum(s1.start + TRANSPONDER_SPS * np.arange(n),
                                                           len(phi) * TRANSPONDER_SPS - 1)]
        d = x1 + gamma * np.exp(1j * phi_k) * x2
        res = fs_mmse_equalize(y2, first, d, sc.equalizer,
                               _nearest_rotated(c.array, c.array, gamma, phi_k))
        body = slice(sc.equalizer.training_symbols, n - GUARD)
        ctx = DetectorContext(res.beta, gamma, phi_k[body], res.n0)
        args = (res.outputs[body], x1[body], x2[body], c, c, ctx)
        ij = mc_ir_estimate(*args, mode="joint")
        i1 = mc_ir_estimate(*args, mode="conditional-1")
        i2 = mc_ir_estimate(*args, mode="conditional-2")
        lo = min((i1, i2), key=lambda e: e.bits)
        prag = (ij.bits, ij.stderr) if ij.bits <= 2 * lo.bits else (2 * lo.bits, 2 * lo.stderr)
        return ChainResult("joint", RatePoint(link.snr_db, max(ij.bits, 0.0), ij.stderr),
                           RatePoint(link.snr_db, max(prag[0], 0.0), prag[1]),
                           (RatePoint(link.snr_db, max(i1.bits, 0.0), i1.stderr),
                            RatePoint(link.snr_db, max(i2.bits, 0.0), i2.stderr)),
                           (res.mse,), n, link.seed)

    if sc.strategy == "fdm":
        sps = 2 * TRANSPONDER_SPS
        p = shaping_pulse(ROLLOFF, 32, sps)
        f1 = modulate(x1, p, sps, FDM_BAUD_RATE)
        f2 = modulate(x2, p, sps, FDM_BAUD_RATE)
        phi = link.phase_noise.realize(len(f1) // sps, rng_phase)
        fc = (1 + ROLLOFF) * FDM_BAUD_RATE
        y, _, _ = fdm_compose(f1, f2, fc, gamma, phi, snr, rng_noise, sc.transponder, ibo,
                              ref_baud=BAUD_RATE)
        phi_k = np.repeat(phi, sps)[np.minimum(f1.start + sps * np.arange(n), len(phi) * sps - 1)]
        rates, mses = [], []
        for branch, (shift, x, g, ph) in enumerate(((-fc / 2, x1, 1.0, 0.0 * phi_k),
                                                     (fc / 2, x2, gamma, phi_k))):
            yb = frequency_shift(y, shift)
            y2, first = front_end(yb, p)
            d = g * np.exp(1j * ph) * x
            res = fs_mmse_equalize(y2, first, d, sc.equalizer,
                                   _nearest_rotated([0.0], c.array, g, ph))
            body = slice(sc.equalizer.training_symbols, n - GUARD)
            ctx = DetectorContext(res.beta, g, ph[body], res.n0)
            est = mc_ir_estimate(res.outputs[body], x[body], None, c, None, ctx, "single")
            rates.append(est)
            mses.append(res.mse)
        # each branch runs at half the baud rate of the full band
        r1, r2 = rates
        full = RatePoint(link.snr_db, max(0.5 * (r1.bits + r2.bits), 0.0), 0.5 * math.hypot(r1.stderr, r2.stderr))
        lo = min(rates, key=lambda e: e.bits)
        prag = RatePoint(link.snr_db, max(lo.bits, 0.0), lo.stderr)
        return ChainResult("fdm", full, prag,
                           tuple(RatePoint(link.snr_db, max(0.5 * r.bits, 0.0), 0.5 * r.stderr) for r in rates),
                           tuple(mses), n, link.seed)

    return _run_alamouti(sc, c, x1, x2, ibo, rng_noise, rng_phase)


def _run_alamouti(sc, c, x1, x2, ibo, rng_noise, rng_phase):
    """Alamouti over successive blocks of ``sc.alamouti_block`` symbols.

    Each block occupies two slots: ``(x1, x2)`` then ``(x2*(-t), -x1*(-t))``.
    The phase process runs continuously over all slots, so short blocks keep
    the two slots of a block nearly coherent.
    """
    link = sc.link
    gamma = link.gamma
    n = sc.n_symbols
    sps = TRANSPONDER_SPS
    p = shaping_pulse(ROLLOFF, 32, sps)
    tail = -(-(len(p) - 1) // sps)
    starts = range(0, n, sc.alamouti_block)
    phi = link.phase_noise.realize(sum(2 * (min(sc.alamouti_block, n - s) + tail) for s in starts), rng_phase)
    pos = 0
    ya_all, zb_all, ph_a_all, ph_b_all = [], [], [], []
    for s in starts:
        L = min(sc.alamouti_block, n - s)
        u1, u2 = x1[s:s + L], x2[s:s + L]
        fa1 = _through(modulate(u1, p, sps), sc, ibo)
        fa2 = _through(modulate(u2, p, sps), sc, ibo)
        fb1 = _through(modulate(np.conj(u2[::-1]), p, sps), sc, ibo)
        fb2 = _through(modulate(-np.conj(u1[::-1]), p, sps), sc, ibo)
        f = len(fa1) // sps
        pa, pb = phi[pos:pos + f], phi[pos + f:pos + 2 * f]
        pos += 2 * f
        ya2, first = front_end(combine_downlink(fa1, fa2, gamma, pa, 0, link.snr, rng_noise), p)
        yb2, _ = front_end(combine_downlink(fb1, fb2, gamma, pb, 0, link.snr, rng_noise), p)
        # conj(y_b(-t)): symbol k of both streams lands on index first + 2k
        idx = 2 * first + 2 * (L - 1) - np.arange(len(ya2))
        valid = (idx >= 0) & (idx < len(yb2))
        zb = np.zeros(len(ya2), complex)
        zb[valid] = np.conj(yb2[idx[valid]])
        k = np.arange(L)
        seg = slice(first, first + 2 * L)
        ya_all.append(ya2[seg])
        zb_all.append(zb[seg])
        ph_a_all.append(np.repeat(pa, sps)[np.minimum(fa1.start + sps * k, len(fa1) - 1)])
        ph_b_all.append(np.repeat(pb, sps)[np.minimum(fb1.start + sps * k, len(fb1) - 1)][::-1])
    ya2, zb = np.concatenate(ya_all), np.concatenate(zb_all)
    ph_a, ph_b = np.concatenate(ph_a_all), np.concatenate(ph_b_all)
    # slot gains (AM/PM rotation, compression) from the training symbols, as for beta
    tr = np.arange(sc.equalizer.training_symbols)
    ref_a = x1[tr] + gamma * np.exp(1j * ph_a[tr]) * x2[tr]
    ref_b = x2[tr] - gamma * np.exp(-1j * ph_b[tr]) * x1[tr]
    ya2 = ya2 / (np.vdot(ref_a, ya2[2 * tr]) / np.vdot(ref_a, ref_a))
    zb = zb / (np.vdot(ref_b, zb[2 * tr]) / np.vdot(ref_b, ref_b))
    g = gamma * np.exp(1j * np.repeat(ph_a, 2))
    norm = math.sqrt(1 + gamma**2)
    streams = ((ya2 - g * zb) / norm, (zb + np.conj(g) * ya2) / norm)
    rates, mses = [], []
    for x, yy in zip((x1, x2), streams):
        res = fs_mmse_equalize(yy, 0, norm * x, sc.equalizer, _nearest(norm * c.array))
        body = slice(sc.equalizer.training_symbols, n - GUARD)
        ctx = DetectorContext(res.beta * norm, 1.0, 0.0, res.n0)
        est = mc_ir_estimate(res.outputs[body], x[body], None, c, None, ctx, "single")
        rates.append(est)
        mses.append(res.mse)
    r1, r2 = rates
    pt = RatePoint(link.snr_db, max(0.5 * (r1.bits + r2.bits), 0.0), 0.5 * math.hypot(r1.stderr, r2.stderr))
    return ChainResult("alamouti", pt, pt,
                       tuple(RatePoint(link.snr_db, max(r.bits, 0.0), r.stderr) for r in rates),
                       tuple(mses), n, link.seed)
