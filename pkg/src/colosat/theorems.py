"""Numerical check of the strategy orderings for several input families.

For every (gamma, snr) cell the harness evaluates the joint, Alamouti and
FDM rates together with their equal-rate (pragmatic) versions and tests

    I_J >= I_A >= I_FDM    and    I_J,p >= I_FDM,p

allowing three standard errors of numerical slack. The entropy inequality
behind the FDM bound is checked separately on Gaussian samples with a
Kozachenko-Leonenko nearest-neighbour entropy estimator.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import astuple, dataclass, fields

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from . import analytic_awgn as aw
from .constellations import constellation_mi_joint, constellation_mi_single, named_constellation
from .core import db_to_linear, gamma_from_db, seeded_rng
from .peak_power import (DEFAULT_QUAD, QuadratureSpec, RingDistribution, single_tx_ir,
                         two_tx_joint_ir)

MODELS = ("gaussian", "ring", "constellation")
SIGMAS = 3.0
# slack for closed-form rates
EXACT_TOL = 1e-9


@dataclass(frozen=True)
class TheoremRow:
    model: str
    gamma_db: float
    snr_db: float
    i_joint: float
    i_alamouti: float
    i_fdm: float
    i_joint_p: float
    i_fdm_p: float
    ordering_ok: bool


@dataclass
class TheoremReport:
    rows: list
    lemma: list
    # cells where the Alamouti rate beats the pragmatic joint rate
    alamouti_beats_pragmatic: list

    @property
    def ok(self) -> bool:
        return all(r.ordering_ok for r in self.rows) and all(l["ok"] for l in self.lemma)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f.name for f in fields(TheoremRow)])
        for r in self.rows:
            w.writerow([repr(v) if isinstance(v, float) else str(v).lower() if isinstance(v, bool) else v
                        for v in astuple(r)])
        return buf.getvalue()


def _ge(a, b, sa=0.0, sb=0.0):
    return a + SIGMAS * math.hypot(sa, sb) + EXACT_TOL >= b


def _cell_rates(model, gamma, snr, quad, constellation):
    """Returns rates and their standard errors, keyed by short names."""
    if model == "gaussian":
        r = aw.awgn_rates(snr, gamma)
        vals = dict(j=r.i_joint, a=r.i_alamouti, f=r.i_fdm, jp=r.i_joint_pragmatic, fp=r.i_fdm_pragmatic)
        return vals, dict.fromkeys(vals, 0.0)
    if model == "ring":
        one = RingDistribution.constant_envelope()
        single = lambda s: single_tx_ir(one, s, quad)  # noqa: E731
        ij = two_tx_joint_ir(one, one, gamma, snr, quad)
        i2 = single(gamma**2 * snr)
        ia = single((1 + gamma**2) * snr)
        f1, f2 = single(2 * snr), single(2 * gamma**2 * snr)
    elif model == "constellation":
        c = named_constellation(constellation)
        _, i2, ij = constellation_mi_joint(c, c, gamma, snr, quad)
        ia = constellation_mi_single(c, (1 + gamma**2) * snr, quad)
        f1 = constellation_mi_single(c, 2 * snr, quad)
        f2 = constellation_mi_single(c, 2 * gamma**2 * snr, quad)
    else:
        raise ValueError(f"unknown input model {model!r}")
    jp, jp_err = (ij.bits, ij.error) if ij.bits <= 2 * i2.bits else (2 * i2.bits, 2 * i2.error)
    vals = dict(j=ij.bits, a=ia.bits, f=0.5 * (f1.bits + f2.bits), jp=jp, fp=f2.bits)
    errs = dict(j=ij.error, a=ia.error, f=0.5 * math.hypot(f1.error, f2.error), jp=jp_err, fp=f2.error)
    return vals, errs


def kl_entropy(samples, k: int = 4) -> float:
    """Kozachenko-Leonenko differential entropy estimate in bits.

    ``samples`` is complex (treated as 2-D real) or an ``(n, d)`` real array.
    """
    x = np.asarray(samples)
    if np.iscomplexobj(x):
        x = np.column_stack([x.real, x.imag])
    x = x.reshape(len(x), -1)
    n, d = x.shape
    dist, _ = cKDTree(x).query(x, k=k + 1)
    eps = dist[:, -1]
    log_vd = (d / 2) * math.log(math.pi) - math.lgamma(d / 2 + 1)
    h = digamma(n) - digamma(k) + log_vd + d * float(np.mean(np.log(eps)))
    return h / math.log(2)


def check_entropy_lemma(var_x: float, var_y: float, n: int = 20_000, seed: int = 0,
                        bias_bound: float = 0.03) -> dict:
    """``h(x + y) >= 1 + (h(x) + h(y)) / 2`` for independent complex Gaussians.

    Each entropy estimate is compared with its closed form
    ``log2(pi e var)``; ``bias_bound`` (bits) covers the estimator bias and
    spread at this sample size.
    """
    rng = seeded_rng(seed, f"lemma:{var_x!r}:{var_y!r}")

    def cn(var):
        return math.sqrt(var / 2) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))

    x, y = cn(var_x), cn(var_y)
    hx, hy, hs = (float(kl_entropy(v)) for v in (x, y, x + y))
    truth = [math.log2(math.pi * math.e * v) for v in (var_x, var_y, var_x + var_y)]
    est_ok = all(abs(e - t) <= bias_bound for e, t in zip((hx, hy, hs), truth))
    gap = hs - 1 - 0.5 * (hx + hy)
    exact_gap = truth[2] - 1 - 0.5 * (truth[0] + truth[1])
    return dict(var_x=var_x, var_y=var_y, h_x=hx, h_y=hy, h_sum=hs, gap=gap,
                exact_gap=exact_gap, ok=bool(est_ok and gap >= -2 * bias_bound))


def verify_theorem_suite(input_model: str, gamma_grid_db, snr_grid_db,
                         quad: QuadratureSpec = DEFAULT_QUAD, constellation: str = "16psk",
                         lemma_variances=((1.0, 1.0), (1.0, 0.25)), seed: int = 0) -> TheoremReport:
    """Evaluate the orderings on a grid of power unbalances and SNRs (dB).

    ``input_model`` is ``gaussian``, ``ring`` (one constant-envelope ring per
    transmitter) or ``constellation`` (the named alphabet on both
    transmitters, uniform relative phase).
    """
    if input_model not in MODELS:
        raise ValueError(f"unknown input model {input_model!r}")
    rows, beats = [], []
    for gdb in gamma_grid_db:
        gamma = gamma_from_db(gdb)
        for sdb in snr_grid_db:
            v, e = _cell_rates(input_model, gamma, db_to_linear(sdb), quad, constellation)
            ok = (_ge(v["j"], v["a"], e["j"], e["a"]) and _ge(v["a"], v["f"], e["a"], e["f"])
                  and _ge(v["jp"], v["fp"], e["jp"], e["fp"]))
            rows.append(TheoremRow(input_model, float(gdb), float(sdb),
                                   *(float(v[k]) for k in ("j", "a", "f", "jp", "fp")), bool(ok)))
            if v["a"] > v["jp"] + SIGMAS * math.hypot(e["a"], e["jp"]):
                beats.append((float(gdb), float(sdb)))
    lemma = [check_entropy_lemma(a, b, seed=seed) for a, b in lemma_variances]
    return TheoremReport(rows, lemma, beats)
