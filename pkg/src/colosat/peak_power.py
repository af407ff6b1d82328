"""Information rates of ring inputs on the peak-power-limited AWGN channel.

A ring distribution is discrete in amplitude and uniform in phase. With
noise power normalized to N = 1 the peak power equals the SNR, and the ring
radii stored in a :class:`RingDistribution` are rescaled so that its peak
``sqrt(P)`` maps to ``sqrt(snr)``.

Because the phase is uniform, the output density depends on ``|y|`` only,
so every mutual information reduces to one radial integral of
``-p log p``. Radial integrals use composite Gauss-Legendre rules; the
two-transmitter density needs one extra angular integral (the other one is
absorbed analytically into a Bessel function).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, i0e, i1e, logsumexp, roots_legendre

from .core import seeded_rng

log = logging.getLogger(__name__)

LOG2E = 1.0 / math.log(2.0)
# |w| beyond TAIL * sqrt(N) carries a mass below exp(-TAIL^2)
TAIL = 8.0
PANEL_ORDER = 16


@dataclass(frozen=True)
class RingDistribution:
    """Input law with rings of radius ``radii[l]`` and probability ``weights[l]``."""

    radii: tuple[float, ...]
    weights: tuple[float, ...]
    peak_power: float = 1.0

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        q = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "radii", tuple(float(v) for v in r))
        object.__setattr__(self, "weights", tuple(float(v) for v in q))
        if r.ndim != 1 or r.size == 0 or r.shape != q.shape:
            raise ValueError("radii and weights must be non-empty 1-D sequences of equal length")
        if not self.peak_power > 0:
            raise ValueError("peak_power must be positive")
        peak = math.sqrt(self.peak_power)
        if np.any(r < 0) or np.any(r > peak * (1 + 1e-12)):
            raise ValueError(f"radii must lie in [0, sqrt(P)] = [0, {peak:g}]")
        if np.any(np.diff(r) <= 0):
            raise ValueError("radii must be strictly increasing")
        if np.any(q < 0) or np.any(q > 1):
            raise ValueError("weights must lie in [0, 1]")
        if abs(q.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {q.sum()!r}")

    @classmethod
    def from_fractions(cls, fractions, weights, peak_power: float = 1.0) -> "RingDistribution":
        """Rings given as fractions of the peak amplitude."""
        w = np.asarray(weights, dtype=float)
        w = w / w.sum()
        return cls(tuple(np.asarray(fractions, dtype=float) * math.sqrt(peak_power)),
                   tuple(w), peak_power)

    @classmethod
    def constant_envelope(cls, peak_power: float = 1.0) -> "RingDistribution":
        return cls((math.sqrt(peak_power),), (1.0,), peak_power)

    @classmethod
    def silent(cls, peak_power: float = 1.0) -> "RingDistribution":
        return cls((0.0,), (1.0,), peak_power)

    @property
    def m(self) -> int:
        return len(self.radii)

    @property
    def fractions(self) -> np.ndarray:
        return np.asarray(self.radii) / math.sqrt(self.peak_power)

    def amplitudes(self, snr: float) -> np.ndarray:
        """Ring radii when the peak amplitude is ``sqrt(snr)`` and N = 1."""
        return self.fractions * math.sqrt(snr)


@dataclass(frozen=True)
class QuadratureSpec:
    """Numerical integration settings.

    ``radial_nodes`` and ``angular_nodes`` are minimum node counts; they are
    raised automatically when the rings are large compared with the noise.
    """

    method: str = "gauss-legendre-polar"
    radial_nodes: int = 256
    angular_nodes: int = 64
    mc_samples: int = 200_000
    tolerance: float = 1e-2
    seed: int = 0

    def __post_init__(self):
        if self.method not in ("gauss-legendre-polar", "monte-carlo"):
            raise ValueError(f"unknown quadrature method {self.method!r}")
        if self.radial_nodes < 8 or self.angular_nodes < 8:
            raise ValueError("node counts must be at least 8")
        if self.mc_samples < 10_000:
            raise ValueError("mc_samples must be at least 1e4")


DEFAULT_QUAD = QuadratureSpec()


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class IRResult:
    """An information rate in bits with its estimated numerical error.

    For Monte Carlo evaluations ``error`` is the standard error.
    """

    bits: float
    error: float
    method: str = ""

    def __post_init__(self):
        object.__setattr__(self, "bits", float(self.bits))
        object.__setattr__(self, "error", float(self.error))

    def __float__(self):
        return float(self.bits)


def log_i0(z):
    """``log I0(z)`` without overflow for large arguments."""
    z = np.asarray(z, dtype=float)
    return np.log(i0e(z)) + np.abs(z)


def ring_output_density(y, rings: RingDistribution, n0: float):
    """Output density of ``y = x + w`` with ring input and ``w ~ CN(0, n0)``.

    Uses the actual ring radii; ``p(y) = (1/(pi N)) sum_l q_l
    exp(-(|y|^2 + p_l^2)/N) I0(2|y| p_l / N)``.
    """
    if not n0 > 0:
        raise ValueError("noise power must be positive")
    return np.exp(_log_density(np.abs(np.asarray(y)), np.asarray(rings.radii),
                               np.asarray(rings.weights), n0))


def _log_density(rho, amps, weights, n0=1.0):
    rho = np.asarray(rho, dtype=float)
    r = rho[..., None]
    with np.errstate(divide="ignore"):
        logq = np.log(weights)
    terms = logq - (r**2 + amps**2) / n0 + log_i0(2.0 * r * amps / n0)
    return logsumexp(terms, axis=-1) - math.log(math.pi * n0)


def _radial_rule(rmax: float, min_nodes: int, panel_width: float = 1.0):
    """Composite Gauss-Legendre nodes and weights on ``[0, rmax]``."""
    n_panels = max(int(math.ceil(rmax / panel_width)), int(math.ceil(min_nodes / PANEL_ORDER)), 1)
    x, w = roots_legendre(PANEL_ORDER)
    edges = np.linspace(0.0, rmax, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _ring_terms(amps, weights, radial_nodes, panel_width=1.0):
    """Radial nodes, weights, per-ring log densities and the mixture log density."""
    rmax = float(np.max(amps)) + TAIL
    rho, w = _radial_rule(rmax, radial_nodes, panel_width)
    z = 2.0 * rho[:, None] * amps
    # log of the ring-l output density at |y| = rho
    log_pl = -(rho[:, None] ** 2 + amps**2) + log_i0(z) - math.log(math.pi)
    with np.errstate(divide="ignore"):
        log_p = logsumexp(log_pl + np.log(weights), axis=-1)
    return rho, w, z, log_pl, log_p


def _ring_cross_entropies(amps, weights, radial_nodes, panel_width=1.0):
    """Per-ring ``d_l = E[log2 p(y|x) - log2 p(y) | ring l]`` for N = 1.

    ``I(x; y) = sum_l q_l d_l``.
    """
    rho, w, _, log_pl, log_p = _ring_terms(amps, weights, radial_nodes, panel_width)
    mass = w[:, None] * 2.0 * math.pi * rho[:, None] * np.exp(log_pl)
    cross = -(mass * log_p[:, None]).sum(axis=0) * LOG2E
    return cross - math.log2(math.pi * math.e)


def _ir_and_grad(amps, weights, radial_nodes):
    """Rate, its gradient w.r.t. the ring amplitudes and the per-ring ``d_l``."""
    rho, w, z, log_pl, log_p = _ring_terms(amps, weights, radial_nodes)
    jac = w * 2.0 * math.pi * rho
    pl = np.exp(log_pl)
    d = -((jac[:, None] * pl) * log_p[:, None]).sum(axis=0) * LOG2E - math.log2(math.pi * math.e)
    # d p_l / d a = p_l (2 rho I1(z)/I0(z) - 2 a)
    safe = np.where(z > 0, z, 1.0)
    ratio = np.where(z > 0, i1e(safe) / i0e(safe), 0.0)
    dpl = pl * (2.0 * rho[:, None] * ratio - 2.0 * amps)
    grad = -np.asarray(weights) * (jac[:, None] * dpl * log_p[:, None]).sum(axis=0) * LOG2E
    return float(np.dot(weights, d)), grad, d


def _ir_quadrature(amps, weights, radial_nodes, panel_width=1.0):
    d = _ring_cross_entropies(amps, weights, radial_nodes, panel_width)
    return float(np.dot(weights, d))


def _ir_monte_carlo(amps, weights, n, rng):
    idx = rng.choice(len(amps), size=n, p=weights)
    theta = rng.uniform(0, 2 * math.pi, n)
    w = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
    y = amps[idx] * np.exp(1j * theta) + w
    log_pyx = -np.abs(w) ** 2 - math.log(math.pi)
    samples = (log_pyx - _log_density(np.abs(y), amps, weights)) * LOG2E
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(n))


def single_tx_ir(rings: RingDistribution, snr: float, quad: QuadratureSpec = DEFAULT_QUAD) -> IRResult:
    """``I(x; y)`` in bits for ``y = x + w`` with ring input at peak SNR ``snr``."""
    if not snr >= 0:
        raise ValueError("snr must be non-negative")
    amps = rings.amplitudes(snr)
    q = np.asarray(rings.weights)
    if np.all(amps[q > 0] == 0):
        return IRResult(0.0, 0.0, quad.method)
    if quad.method == "monte-carlo":
        rng = seeded_rng(quad.seed, f"single_tx_ir:{snr!r}")
        value, se = _ir_monte_carlo(amps, q, quad.mc_samples, rng)
        if se > quad.tolerance:
            raise QuadratureError(f"Monte Carlo standard error {se:.2e} exceeds tolerance {quad.tolerance:.2e}")
        return IRResult(value, se, quad.method)
    value = _ir_quadrature(amps, q, quad.radial_nodes)
    coarse = _ir_quadrature(amps, q, quad.radial_nodes // 2, panel_width=2.0)
    return IRResult(value, abs(value - coarse), quad.method)


def two_tx_conditional_ir(rings: RingDistribution, scale: float, snr: float,
                          quad: QuadratureSpec = DEFAULT_QUAD) -> IRResult:
    """``I(x2; y | x1)``: the known signal is removed, leaving ``scale * x2 + w``."""
    return single_tx_ir(rings, scale**2 * snr, quad)


# -- optimization ------------------------------------------------------------


def _optimize_weights(amps, weights, radial_nodes, iters=300, tol=1e-10):
    """Blahut-Arimoto update of the ring weights for fixed radii.

    ``q_l <- q_l 2^{d_l}`` (normalized) increases the rate monotonically; the
    loop stops once the capacity gap bound ``max_l d_l - sum_l q_l d_l`` is
    below ``tol``.
    """
    q = np.asarray(weights, dtype=float).copy()
    for _ in range(iters):
        d = _ring_cross_entropies(amps, q, radial_nodes)
        value = float(np.dot(q, d))
        if float(np.max(d)) - value < tol:
            break
        q = q * np.exp2(d - d.max())
        q /= q.sum()
    return q, float(np.dot(q, _ring_cross_entropies(amps, q, radial_nodes)))


def _joint_ascent(fracs, weights, snr, radial_nodes, tol):
    """L-BFGS-B over radii (bounded to [0, 1]) and softmax weight logits together.

    With ``q = softmax(s)`` the rate gradient is ``q_j (d_j - I)``.
    """
    root = math.sqrt(snr)
    m = len(fracs)
    s0 = np.log(np.maximum(np.asarray(weights, dtype=float), 1e-12))

    def fun(v):
        f, s = v[:m], v[m:]
        q = np.exp(s - s.max())
        q /= q.sum()
        val, g_amp, d = _ir_and_grad(f * root, q, radial_nodes)
        return -val, -np.concatenate([g_amp * root, q * (d - val)])

    bounds = [(0.0, 1.0)] * m + [(-30.0, 30.0)] * m
    res = minimize(fun, np.concatenate([fracs, s0 - s0.max()]), jac=True, method="L-BFGS-B",
                   bounds=bounds, options={"ftol": 1e-12, "gtol": 1e-8, "maxiter": 2000})
    f, s = res.x[:m], res.x[m:]
    q = np.exp(s - s.max())
    q /= q.sum()
    f, q = _merge(f, q)
    q, value = _optimize_weights(f * root, q, radial_nodes, iters=50, tol=tol * 0.1)
    return f, q, value, bool(res.success) or res.status == 2


def _merge(fracs, q, tol=1e-6):
    """Sort rings, merge coincident radii and drop empty rings."""
    order = np.argsort(fracs)
    fr, qq = np.asarray(fracs)[order], np.asarray(q)[order]
    out_f, out_q = [], []
    for f, w in zip(fr, qq):
        if out_f and f - out_f[-1] < tol:
            out_q[-1] += w
        else:
            out_f.append(float(f))
            out_q.append(float(w))
    out_f, out_q = np.array(out_f), np.array(out_q)
    keep = out_q > 1e-12
    return out_f[keep], out_q[keep] / out_q[keep].sum()


@dataclass
class RingOptimum:
    """Optimized ring distribution at one SNR.

    ``per_m[k]`` is the best rate with at most ``k + 1`` rings.
    """

    rings: RingDistribution
    bits: float
    m_best: int
    per_m: list[float] = field(default_factory=list)
    converged: bool = True


def optimize_rings(m_max: int, snr: float, quad: QuadratureSpec = DEFAULT_QUAD,
                   tol: float = 1e-5, m_tol: float = 1e-4, peak_power: float = 1.0) -> RingOptimum:
    """Best ring distribution with at most ``m_max`` rings at peak SNR ``snr``.

    Each ring count m is warm-started from the (m-1)-ring optimum with one
    extra ring placed at the origin and in the two widest gaps, plus an
    evenly spaced start (multi-start); radii and weights are then improved jointly by L-BFGS-B
    with analytic gradients and the weights polished by Blahut-Arimoto
    updates. The rate
    is the maximum over all ring counts up to m, so ``per_m`` is a
    non-decreasing envelope. Ring counts stop growing once two consecutive
    increments gain less than ``tol`` bits. ``m_best`` is the smallest ring
    count whose rate is within ``m_tol`` of the best one.
    """
    if not 1 <= m_max <= 20:
        raise ValueError("m_max must lie in [1, 20]")
    if not snr > 0:
        raise ValueError("snr must be positive")
    nodes = quad.radial_nodes
    per_m: list[float] = []
    best = None
    converged_all = True
    stalled = 0
    prev = None
    for m in range(1, m_max + 1):
        if prev is None:
            starts = [(np.array([1.0]), np.array([1.0]))]
        else:
            pf, pq = prev
            edges = np.concatenate([[0.0], pf])
            gaps = np.diff(edges)
            cand = {0.0}
            for j in np.argsort(gaps)[::-1][:2]:
                cand.add(float(0.5 * (edges[j] + edges[j + 1])))
            starts = [(np.concatenate([pf, [new]]), np.concatenate([pq * (1 - 1 / m), [1 / m]]))
                      for new in sorted(cand)]
            # evenly spaced rings with weights growing like the ring circumference
            even = np.linspace(1.0 / m, 1.0, m)
            starts.append((even, even / even.sum()))
        results = [_joint_ascent(fr, q, snr, nodes, tol) for fr, q in starts]
        fr, q, val, conv = max(results, key=lambda t: t[2])
        converged_all &= conv
        if per_m and val < per_m[-1]:
            # nested feasible sets: the (m-1)-ring optimum is still available
            fr, q, val = prev[0], prev[1], per_m[-1]
        stalled = stalled + 1 if per_m and val - per_m[-1] < tol else 0
        per_m.append(val)
        if best is None or val > best[2]:
            best = (fr, q, val)
        prev = _merge(fr, q)
        if stalled >= 2:
            per_m.extend([per_m[-1]] * (m_max - m))
            break
    if not converged_all:
        log.warning("ring optimization at snr=%g did not fully converge; returning best so far", snr)
    env = np.array(per_m)
    m_best = int(np.argmax(env >= env[-1] - m_tol)) + 1
    fr, q = _merge(best[0], best[1])
    rings = RingDistribution.from_fractions(fr, q, peak_power)
    return RingOptimum(rings, float(env[-1]), m_best, [float(v) for v in env], converged_all)


@lru_cache(maxsize=512)
def envelope_ir(snr: float, m_max: int = 20, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Single-transmitter rate with optimized rings (the '1 satellite' curve)."""
    if snr <= 0:
        return 0.0
    return optimize_rings(m_max, snr, quad).bits


# -- two transmitters -----------------------------------------------------------


def _angular_rule(n):
    x, w = roots_legendre(n)
    # [0, pi]
    return 0.5 * math.pi * (x + 1.0), 0.5 * math.pi * w


def _log_density_two(rho, a1, q1, a2, q2, n_ang):
    """``log p(y)`` at ``|y| = rho`` for ``y = x1 + x2' + w`` with ring inputs.

    ``a2`` already includes the unbalance. The theta1 integral is done
    analytically (Bessel I0), theta2 by Gauss-Legendre on [0, pi].
    """
    rho = np.asarray(rho, dtype=float)
    if np.all(a2[q2 > 0] == 0):
        return _log_density(rho, a1, q1)
    th, wt = _angular_rule(n_ang)
    with np.errstate(divide="ignore"):
        lq1 = np.log(q1)
        lq2 = np.log(q2)
    # z = rho - a2 e^{j th}, shape (rho, a2, th)
    r = rho[:, None, None]
    amp2 = a2[None, :, None]
    c = np.cos(th)[None, None, :]
    z2 = r**2 + amp2**2 - 2.0 * r * amp2 * c
    z = np.sqrt(np.maximum(z2, 0.0))
    terms = []
    for l in range(len(a1)):
        inner = -(z2 + a1[l] ** 2) + log_i0(2.0 * z * a1[l]) + np.log(wt)[None, None, :]
        terms.append(lq1[l] + lq2[None, :] + logsumexp(inner, axis=-1))
    terms = np.stack(terms, axis=-1).reshape(len(rho), -1)
    return logsumexp(terms, axis=-1) - 2.0 * math.log(math.pi)


def _joint_nodes(a1, a2, quad, coarse=False):
    span = float(np.max(a1) + np.max(a2)) + TAIL
    n_ang = max(quad.angular_nodes, int(24 * (1.0 + float(np.max(a2)))))
    panel = 0.5
    n_rad = quad.radial_nodes
    if coarse:
        n_ang, panel, n_rad = max(n_ang // 2, 8), 1.0, n_rad // 2
    rho, w = _radial_rule(span, n_rad, panel)
    return rho, w, n_ang


def _joint_h(a1, q1, a2, q2, quad, coarse=False, chunk=256):
    rho, w, n_ang = _joint_nodes(a1, a2, quad, coarse)
    h = 0.0
    for s in range(0, len(rho), chunk):
        r = rho[s:s + chunk]
        lp = _log_density_two(r, a1, q1, a2, q2, n_ang)
        h -= float(np.sum(w[s:s + chunk] * 2 * math.pi * r * np.exp(lp) * lp))
    return h * LOG2E


def two_tx_joint_ir(rings1: RingDistribution, rings2: RingDistribution, gamma: float,
                    snr: float, quad: QuadratureSpec = DEFAULT_QUAD) -> IRResult:
    """``I(x1, x2; y)`` for ``y = x1 + gamma x2 + w`` with ring inputs (N = 1)."""
    if not snr >= 0:
        raise ValueError("snr must be non-negative")
    a1 = rings1.amplitudes(snr)
    a2 = gamma * rings2.amplitudes(snr)
    q1 = np.asarray(rings1.weights)
    q2 = np.asarray(rings2.weights)
    if quad.method == "monte-carlo":
        rng = seeded_rng(quad.seed, f"two_tx_joint_ir:{gamma!r}:{snr!r}")
        n = quad.mc_samples
        x1 = a1[rng.choice(len(a1), n, p=q1)] * np.exp(2j * math.pi * rng.random(n))
        x2 = a2[rng.choice(len(a2), n, p=q2)] * np.exp(2j * math.pi * rng.random(n))
        w = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
        rho = np.abs(x1 + x2 + w)
        _, _, n_ang = _joint_nodes(a1, a2, quad)
        lp = np.concatenate([_log_density_two(rho[s:s + 4096], a1, q1, a2, q2, n_ang)
                             for s in range(0, n, 4096)])
        samples = (-np.abs(w) ** 2 - math.log(math.pi) - lp) * LOG2E
        se = float(samples.std(ddof=1) / math.sqrt(n))
        if se > quad.tolerance:
            raise QuadratureError(f"Monte Carlo standard error {se:.2e} exceeds tolerance {quad.tolerance:.2e}")
        return IRResult(float(samples.mean()), se, quad.method)
    base = math.log2(math.pi * math.e)
    value = _joint_h(a1, q1, a2, q2, quad) - base
    coarse = _joint_h(a1, q1, a2, q2, quad, coarse=True) - base
    return IRResult(value, abs(value - coarse), quad.method)


def peak_region(rings1: RingDistribution, rings2: RingDistribution, gamma: float, snr: float,
                quad: QuadratureSpec = DEFAULT_QUAD):
    """MAC region of the peak-power channel for the given ring inputs."""
    from .strategies import assemble_region

    i1 = single_tx_ir(rings1, snr, quad)
    i2 = two_tx_conditional_ir(rings2, gamma, snr, quad)
    ij = two_tx_joint_ir(rings1, rings2, gamma, snr, quad)
    tol = 3.0 * (i1.error + i2.error + ij.error) + 1e-9
    return assemble_region(i1.bits, i2.bits, ij.bits, tol=tol)


def fdm_ir(rings: RingDistribution, gamma: float, snr: float, quad: QuadratureSpec = DEFAULT_QUAD):
    """FDM: two half-band subchannels at ``2 snr`` and ``2 gamma^2 snr``.

    Returns ``(I_FDM, I_FDM,p)``.
    """
    r1 = single_tx_ir(rings, 2.0 * snr, quad).bits
    r2 = single_tx_ir(rings, 2.0 * gamma**2 * snr, quad).bits
    return 0.5 * (r1 + r2), r2


def alamouti_ir(rings: RingDistribution, gamma: float, snr: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Each stream sees ``sqrt(1 + gamma^2) x + w`` after combining."""
    return single_tx_ir(rings, (1.0 + gamma**2) * snr, quad).bits


def optimize_two_tx(m: int, gamma: float, snr: float, quad: QuadratureSpec = DEFAULT_QUAD,
                    starts: int = 3, seed: int = 0, maxiter: int = 600):
    """Best joint rate over pairs of m-ring inputs.

    Nelder-Mead on an unconstrained parametrization: per transmitter the
    outer radius is a logistic in (0, 1], inner radii are cumulative
    softplus increments below it, and weights are a softmax. Returns
    ``(bits, rings1, rings2)``.
    """
    rng = seeded_rng(seed, f"optimize_two_tx:{m}:{gamma!r}:{snr!r}")
    k = 2 * m + 1

    def unpack(v):
        out = []
        for t in range(2):
            blk = v[t * k:(t + 1) * k]
            inc = np.logaddexp(0.0, blk[:m]) + 1e-6
            top = float(expit(blk[m]))
            fr = np.cumsum(inc) / np.sum(inc) * top
            lw = blk[m + 1:]
            q = np.exp(lw - lw.max())
            out.append((fr, q / q.sum()))
        return out

    def objective(v):
        (f1, q1), (f2, q2) = unpack(v)
        root = math.sqrt(snr)
        return -(_joint_h(f1 * root, q1, gamma * f2 * root, q2, quad) - math.log2(math.pi * math.e))

    # first start: outer ring at the peak carrying almost all the mass
    lead = np.concatenate([np.zeros(m), [8.0], np.linspace(-4.0, 0.0, m)])
    best = None
    for s in range(starts):
        if s == 0:
            v0 = np.concatenate([lead, lead])
        else:
            v0 = np.concatenate([np.concatenate([rng.normal(0, 1, m), [rng.normal(2, 1)], rng.normal(0, 1, m)])
                                 for _ in range(2)])
        res = minimize(objective, v0, method="Nelder-Mead",
                       options={"maxiter": maxiter, "xatol": 1e-4, "fatol": 1e-6})
        if best is None or res.fun < best.fun:
            best = res
    (f1, q1), (f2, q2) = unpack(best.x)
    return (-float(best.fun),
            RingDistribution.from_fractions(f1, q1),
            RingDistribution.from_fractions(f2, q2))


def peak_strategy_rates(snr_db, gamma: float, m_max: int = 20,
                        quad: QuadratureSpec = DEFAULT_QUAD) -> dict:
    """Rate curves of every strategy on the peak-power channel.

    Joint transmission uses one constant-envelope ring per transmitter.
    Single-user strategies (single satellite, FDM, Alamouti) use the
    optimized ring envelope at their effective SNR.
    """
    from .core import RateCurve, db_to_linear

    one = RingDistribution.constant_envelope()
    out = {k: [] for k in ("joint", "joint-pragmatic", "fdm", "fdm-pragmatic", "alamouti", "single")}
    for sd in snr_db:
        s = db_to_linear(sd)
        ij = two_tx_joint_ir(one, one, gamma, s, quad).bits
        i2 = single_tx_ir(one, gamma**2 * s, quad).bits
        out["joint"].append(ij)
        out["joint-pragmatic"].append(min(ij, 2.0 * i2))
        f1, f2 = envelope_ir(2.0 * s, m_max, quad), envelope_ir(2.0 * gamma**2 * s, m_max, quad)
        out["fdm"].append(0.5 * (f1 + f2))
        out["fdm-pragmatic"].append(f2)
        out["alamouti"].append(envelope_ir((1.0 + gamma**2) * s, m_max, quad))
        out["single"].append(envelope_ir(s, m_max, quad))
    return {k: RateCurve.from_arrays(k, list(snr_db), v) for k, v in out.items()}
