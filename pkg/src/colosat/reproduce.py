"""Recipes that regenerate each figure and table as CSV data plus plots.

Every recipe returns a :class:`Bundle`: text files (CSV and a gnuplot
script) and the panels that :func:`colosat.plotting.render_png` draws.
Recipes accept an optional SNR grid so that tests can run them cheaply.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .constellations import envelope
from .core import RateCurve, db_to_linear, gamma_from_db, seeded_rng
from .peak_power import RingDistribution, optimize_rings, peak_region
from .plotting import Panel, Series, gnuplot_script
from .sweep import SweepConfig, curves_to_csv, run_sweep, winners
from .transponder import (ROLLOFF, TRANSPONDER_SPS, amplitude_distribution, apply_transponder,
                          combine_downlink, load_transponder_spec, modulate, shaping_pulse)

SNR_LABEL = "P/N [dB]"
SAT_LABEL = "Psat/N [dB]"
SE_LABEL = "spectral efficiency [bit/s/Hz]"
TRANSPONDER_SET = ("qpsk", "8psk", "16psk", "16apsk", "32psk", "32apsk")
PSK_FAMILY = ("qpsk", "8psk", "16psk", "32psk")
APSK_FAMILY = ("qpsk", "8psk", "16apsk", "32apsk")
SINGLE_SET = ("qpsk", "8psk", "16psk", "16apsk", "32psk", "32apsk", "64psk", "64apsk")
# reference envelope winners: (modulation order label, from dB, to dB)
TABLE_REFERENCE = {
    "table1": (("QPSK", -10.0, 0.0), ("8PSK", 0.0, 7.5), ("16-ary", 7.5, 25.0)),
    "table2": (("QPSK", -10.0, 5.0), ("8PSK", 5.0, 12.5), ("16-ary", 12.5, 25.0)),
}


@dataclass
class Bundle:
    figure_id: str
    files: dict = field(default_factory=dict)
    panels: list = field(default_factory=list)
    intervals: list = field(default_factory=list)


def _grid(grid, start, stop, step):
    """Explicit SNR points (ascending, evenly spaced) or the recipe default."""
    if grid is not None:
        g = np.asarray(grid, dtype=float)
        if g.ndim != 1 or g.size == 0:
            raise ValueError("grid must be a non-empty sequence of SNR points")
        if g.size > 1 and (np.any(np.diff(g) <= 0) or np.ptp(np.diff(g)) > 1e-9):
            raise ValueError("grid points must be ascending and evenly spaced")
        return [round(float(v), 9) for v in g]
    n = int(round((stop - start) / step)) + 1
    return [round(start + k * step, 9) for k in range(n)]


def _cfg_for(grid, **kw):
    g = list(grid)
    step = g[1] - g[0] if len(g) > 1 else 1.0
    return SweepConfig(snr_start=g[0], snr_stop=g[-1], snr_step=step, **kw)


def _series(curve: RateCurve, label=None, style="line"):
    return Series(tuple(curve.snr_db), tuple(curve.rates), label or curve.label, style)


def _gamma_label(gdb):
    return f"gamma2={gdb:g}dB"


def _awgn_avg(fid, grid, seed, jobs, pragmatic):
    grid = _grid(grid, -10.0, 25.0, 0.5)
    names = ("joint-pragmatic", "fdm-pragmatic") if pragmatic else ("joint", "fdm")
    files, series = {}, []
    for st in names:
        curves = []
        for gdb in (0.0, -3.0, -6.0):
            c = run_sweep(_cfg_for(grid, channel="awgn-avg", strategies=(st,), gamma_db_sq=gdb, seed=seed))[st][0]
            curves.append(replace(c, label=_gamma_label(gdb)))
            series.append(_series(c, f"{st} {_gamma_label(gdb)}"))
        files[f"{st}.csv"] = curves_to_csv(curves)
    single = run_sweep(_cfg_for(grid, channel="awgn-avg", strategies=("single",)))["single"][0]
    files["single.csv"] = curves_to_csv([replace(single, label="single")])
    series.append(_series(single, "single satellite"))
    title = ("Pragmatic" if pragmatic else "Joint") + " SE, average-power AWGN"
    return Bundle(fid, files, [Panel(title, SNR_LABEL, SE_LABEL, tuple(series))])


def fig3(grid=None, seed=0, jobs=1):
    return _awgn_avg("fig3", grid, seed, jobs, pragmatic=False)


def fig4(grid=None, seed=0, jobs=1):
    return _awgn_avg("fig4", grid, seed, jobs, pragmatic=True)


def _ring_sweep(grid, m_max):
    return [(s, optimize_rings(m_max, db_to_linear(s))) for s in grid]


def fig5(grid=None, seed=0, jobs=1, m_max=20):
    grid = _grid(grid, -10.0, 25.0, 2.5)
    opts = _ring_sweep(grid, m_max)
    curves = [RateCurve.from_arrays("single", grid, [o.per_m[m - 1] for _, o in opts], label=f"m<={m}")
              for m in range(1, m_max + 1)]
    shown = [c for m, c in enumerate(curves, 1) if m <= 6 or m == m_max]
    panel = Panel("Single transmitter, rings with at most m circles", SNR_LABEL, SE_LABEL,
                  tuple(_series(c) for c in shown))
    return Bundle("fig5", {"single.csv": curves_to_csv(curves)}, [panel])


def fig6(grid=None, seed=0, jobs=1, m_max=20):
    grid = _grid(grid, -10.0, 25.0, 1.0)
    opts = _ring_sweep(grid, m_max)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("snr_db", "m_opt", "rate_bits"))
    for s, o in opts:
        w.writerow((repr(float(s)), o.m_best, repr(float(o.bits))))
    panel = Panel("Optimal number of circles", SNR_LABEL, "m",
                  (Series(tuple(grid), tuple(o.m_best for _, o in opts), "m*", "step"),))
    return Bundle("fig6", {"optimal_m.csv": buf.getvalue()}, [panel])


def fig7(grid=None, seed=0, jobs=1, m_max=20):
    grid = _grid(grid, -10.0, 25.0, 2.5)
    per = {}
    for gdb in (0.0, -6.0):
        res = run_sweep(_cfg_for(grid, channel="awgn-peak", gamma_db_sq=gdb, m_max=m_max, seed=seed))
        for st, cs in res.items():
            per.setdefault(st, []).append(replace(cs[0], label=_gamma_label(gdb)))
    files = {f"{st}.csv": curves_to_csv(cs) for st, cs in per.items()}
    panels = []
    for title, names in (("Joint SE, peak-power AWGN", ("joint", "fdm", "alamouti")),
                         ("Pragmatic SE, peak-power AWGN", ("joint-pragmatic", "fdm-pragmatic", "alamouti"))):
        series = [_series(c, f"{st} {c.label}") for st in names for c in per[st]]
        series.append(_series(per["single"][0], "single satellite"))
        panels.append(Panel(title, SNR_LABEL, SE_LABEL, tuple(series)))
    return Bundle("fig7", files, panels)


def fig8(grid=None, seed=0, jobs=1, single_set=SINGLE_SET, joint_sets=(PSK_FAMILY, APSK_FAMILY)):
    grid = _grid(grid, -10.0, 25.0, 2.5)
    one = run_sweep(_cfg_for(grid, channel="awgn-peak", strategies=("single",), constellations=tuple(single_set),
                             seed=seed), jobs)["single"]
    rings = run_sweep(_cfg_for(grid, channel="awgn-peak", strategies=("single", "joint"), m_max=20))
    files = {"single.csv": curves_to_csv(one + [replace(rings["single"][0], label="rings")])}
    p1 = Panel("Single transmitter, PSK/APSK", SNR_LABEL, SE_LABEL,
               tuple(_series(c) for c in one if c.label != "envelope")
               + (_series(rings["single"][0], "capacity (rings)"),))
    names = sorted(set().union(*joint_sets), key=lambda n: (int("".join(ch for ch in n if ch.isdigit()) or 4), n))
    joint = run_sweep(_cfg_for(grid, channel="awgn-peak", strategies=("joint", "joint-pragmatic"),
                               constellations=tuple(names), seed=seed), jobs)
    series = []
    for st in ("joint", "joint-pragmatic"):
        by = {c.label: c for c in joint[st]}
        env_curves = []
        for fam, tag in zip(joint_sets, ("psk", "apsk")):
            env, _ = envelope([by[n] for n in fam])
            env_curves.append(replace(env, label=f"envelope-{tag}"))
            series.append(_series(env, f"{st} {tag} envelope"))
        files[f"{st}.csv"] = curves_to_csv([c for c in joint[st] if c.label != "envelope"] + env_curves
                                           + [replace(rings["joint"][0], label="rings")])
    series.append(_series(rings["joint"][0], "joint bound (one ring)"))
    p2 = Panel("Two transmitters, gamma2=0dB", SNR_LABEL, SE_LABEL, tuple(series))
    return Bundle("fig8", files, [p1, p2])


def fig9(grid=None, seed=0, jobs=1):
    grid = _grid(grid, 0.0, 20.0, 5.0)
    gamma = gamma_from_db(-6.0)
    one = RingDistribution.constant_envelope()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("snr_db", "point", "r1", "r2"))
    series = []
    for s in grid:
        reg = peak_region(one, one, gamma, db_to_linear(s))
        for name, (r1, r2) in reg.points.items():
            w.writerow((repr(float(s)), name, repr(float(r1)), repr(float(r2))))
        poly = [(0.0, 0.0), reg.A, reg.B, reg.C, reg.D, (0.0, 0.0)]
        series.append(Series(tuple(p[0] for p in poly), tuple(p[1] for p in poly), f"P/N={s:g}dB"))
    panel = Panel("SE regions, peak-power AWGN, gamma2=-6dB", "R1 [bit/s/Hz]", "R2 [bit/s/Hz]", tuple(series))
    return Bundle("fig9", {"regions.csv": buf.getvalue()}, [panel])


def _transponder(fid, gdb, grid, seed, jobs, n_symbols, constellations):
    grid = _grid(grid, -10.0, 25.0, 2.5)
    cfg = _cfg_for(grid, channel="transponder", gamma_db_sq=gdb, constellations=tuple(constellations),
                   n_symbols=n_symbols, seed=seed)
    res = run_sweep(cfg, jobs)
    files = {f"{st}.csv": curves_to_csv(cs) for st, cs in res.items()}
    series = []
    for st in ("joint-pragmatic", "alamouti", "fdm", "single"):
        env = res[st][-1]
        series.append(_series(env, f"{st} envelope"))
    panel = Panel(f"Transponder, gamma2={gdb:g}dB", SAT_LABEL, SE_LABEL, tuple(series))
    b = Bundle(fid, files, [panel])
    b.intervals = winners(res["joint-pragmatic"])
    return b


def fig10(grid=None, seed=0, jobs=1, n_symbols=20_000, constellations=TRANSPONDER_SET):
    return _transponder("fig10", 0.0, grid, seed, jobs, n_symbols, constellations)


def fig15(grid=None, seed=0, jobs=1, n_symbols=20_000, constellations=TRANSPONDER_SET):
    return _transponder("fig15", -6.0, grid, seed, jobs, n_symbols, constellations)


def amplitude_study(n_symbols=100_000, constellation="16psk", ibo_db=3.0, seed=0, phase=0.3):
    """Amplitude laws of one and two overlapped transponder outputs."""
    from .constellations import named_constellation

    c = named_constellation(constellation)
    tp = load_transponder_spec()
    p = shaping_pulse(ROLLOFF, 32, TRANSPONDER_SPS)
    rng = seeded_rng(seed, f"amplitude:{constellation}:{ibo_db!r}")
    frames = [apply_transponder(modulate(c.array[rng.integers(0, c.size, n_symbols)], p, TRANSPONDER_SPS),
                                tp, ibo_db) for _ in range(2)]
    two = combine_downlink(frames[0], frames[1], 1.0, phase)
    # drop the filter transients at both ends
    cut = slice(len(p), len(frames[0]) - len(p))
    return (amplitude_distribution(frames[0].samples[cut]), amplitude_distribution(two.samples[cut]))


def _amplitude(fid, which, seed):
    single, two = amplitude_study(seed=seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if which == "pdf":
        x = 0.5 * (single.edges[1:] + single.edges[:-1])
        two_pdf = np.interp(x, 0.5 * (two.edges[1:] + two.edges[:-1]), two.pdf, right=0.0)
        ys = (single.pdf, two_pdf, 2 * x * np.exp(-x**2))
    else:
        x = np.linspace(0.0, 3.0, 201)
        cdf = lambda d: np.searchsorted(d.cdf_x, x, side="right") / len(d.cdf_x)  # noqa: E731
        ys = (cdf(single), cdf(two), 1 - np.exp(-x**2))
    w.writerow(("amplitude", "single", "two", "gaussian"))
    for r in zip(x, *ys):
        w.writerow(tuple(repr(float(v)) for v in r))
    ks = io.StringIO()
    kw = csv.writer(ks, lineterminator="\n")
    kw.writerow(("signal", "ks_rayleigh"))
    kw.writerow(("single", repr(single.ks_rayleigh)))
    kw.writerow(("two", repr(two.ks_rayleigh)))
    labels = ("one signal", "two overlapped signals", "Gaussian reference")
    panel = Panel(f"Amplitude {which.upper()}, 16PSK, IBO=3dB, gamma2=0dB", "normalized amplitude",
                  which.upper(), tuple(Series(tuple(x), tuple(y), lab) for y, lab in zip(ys, labels)))
    return Bundle(fid, {f"amplitude_{which}.csv": buf.getvalue(), "ks.csv": ks.getvalue()}, [panel])


def fig13(grid=None, seed=0, jobs=1):
    return _amplitude("fig13", "pdf", seed)


def fig14(grid=None, seed=0, jobs=1):
    return _amplitude("fig14", "cdf", seed)


def order_label(name: str) -> str:
    """``qpsk -> QPSK``, ``8psk -> 8PSK``, ``16psk/16apsk -> 16-ary``."""
    m = int("".join(ch for ch in name if ch.isdigit()) or 4)
    if name.lower() in ("qpsk", "bpsk"):
        return name.upper()
    return f"{m}PSK" if m <= 8 else f"{m}-ary"


def merge_intervals(intervals):
    """Join neighbouring intervals whose winners share a modulation order."""
    out = []
    for lab, a, b in intervals:
        lab = order_label(lab)
        if out and out[-1][0] == lab:
            out[-1] = (lab, out[-1][1], b)
        else:
            out.append((lab, a, b))
    return out


def _intervals_csv(intervals):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("modulation", "from_db", "to_db"))
    for lab, a, b in intervals:
        w.writerow((lab, repr(float(a)), repr(float(b))))
    return buf.getvalue()


def _table(fid, figure, grid, seed, jobs, n_symbols, constellations):
    b = figure(grid, seed, jobs, n_symbols, constellations)
    b.figure_id = fid
    merged = merge_intervals(b.intervals)
    b.files["intervals.csv"] = _intervals_csv(b.intervals)
    b.files["intervals_by_order.csv"] = _intervals_csv(merged)
    b.files["reference.csv"] = _intervals_csv(TABLE_REFERENCE[fid])
    b.intervals = merged
    return b


def table1(grid=None, seed=0, jobs=1, n_symbols=20_000, constellations=TRANSPONDER_SET):
    return _table("table1", fig10, grid, seed, jobs, n_symbols, constellations)


def table2(grid=None, seed=0, jobs=1, n_symbols=20_000, constellations=TRANSPONDER_SET):
    return _table("table2", fig15, grid, seed, jobs, n_symbols, constellations)


def boundary_errors(intervals, reference) -> dict:
    """``|boundary - reference|`` (dB) for each reference handover that was observed."""
    got = {(a, b): x for (a, _, x), (b, _, _) in zip(intervals, intervals[1:])}
    out = {}
    for (a, _, x), (b, _, _) in zip(reference, reference[1:]):
        out[f"{a}->{b}"] = abs(got[(a, b)] - x) if (a, b) in got else math.inf
    return out


RECIPES = {
    "fig3": fig3, "fig4": fig4, "fig5": fig5, "fig6": fig6, "fig7": fig7, "fig8": fig8, "fig9": fig9,
    "fig10": fig10, "fig13": fig13, "fig14": fig14, "fig15": fig15, "table1": table1, "table2": table2,
}


def reproduce(figure_id: str, seed: int = 0, jobs: int = 1, **kwargs) -> Bundle:
    """Run one recipe and attach its gnuplot script."""
    if figure_id not in RECIPES:
        raise KeyError(f"unknown id {figure_id!r}; available: {', '.join(RECIPES)}")
    b = RECIPES[figure_id](seed=seed, jobs=jobs, **kwargs)
    b.files[f"{figure_id}.gp"] = gnuplot_script(b.panels, f"{figure_id}.png")
    return b
