"""Sweep configurations, batch evaluation and result files.

A sweep evaluates rate curves on an SNR grid for one channel model

``awgn-avg``
    Gaussian inputs, closed forms.
``awgn-peak``
    peak-power channel; one constant-envelope ring per transmitter for the
    joint strategies and optimized rings for the single-user ones, or, when
    ``constellations`` is set, the named alphabets.
``transponder``
    waveform simulation through the nonlinear transponder and the adaptive
    receiver.

Every strategy is written to ``<strategy>.csv`` with the header
``snr_db,rate_bits,stderr,label``. Floats are written with ``repr`` so that
reading a file back reproduces the curves exactly.
"""

from __future__ import annotations

import configparser
import csv
import io
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import analytic_awgn as aw
from .constellations import (constellation_mi_joint, constellation_mi_single, envelope,
                             named_constellation)
from .core import STRATEGIES, LinkConfig, PhaseNoiseSpec, RateCurve, db_to_linear, gamma_from_db
from .peak_power import peak_strategy_rates
from .receiver import GUARD, EqualizerSpec, Scenario, run_strategy_chain
from .transponder import hpa_table_path, load_transponder_spec

CHANNELS = ("awgn-avg", "awgn-peak", "transponder")
CSV_HEADER = ("snr_db", "rate_bits", "stderr", "label")
# gamma >= 1/2
MIN_GAMMA_DB_SQ = 20.0 * math.log10(0.5)

_KEYS = {
    "sweep": {"channel", "strategies", "gamma_db_sq", "snr_start", "snr_stop", "snr_step", "seed",
              "output"},
    "model": {"constellations", "m_max", "transponder", "n_symbols", "ibo_db", "phase_model",
              "phase_initial", "phase_step_std"},
    "equalizer": {"taps", "algorithm", "step_or_forgetting", "training_symbols", "decision_directed"},
}


class ConfigError(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Diagnostic:
    line: int | None
    field: str
    message: str
    source: str = "<config>"

    def __str__(self):
        where = f"{self.source}:{self.line}" if self.line else self.source
        return f"{where}: {self.field}: {self.message}"


@dataclass(frozen=True)
class SweepConfig:
    channel: str = "awgn-avg"
    strategies: tuple = STRATEGIES
    gamma_db_sq: float = 0.0
    snr_start: float = -10.0
    snr_stop: float = 25.0
    snr_step: float = 0.5
    constellations: tuple = ()
    m_max: int = 20
    transponder: str | None = None
    n_symbols: int = 20_000
    ibo_db: float | None = None
    # slow Wiener phase, decorrelating well within a 1e4-symbol record
    phase: PhaseNoiseSpec = field(default_factory=lambda: PhaseNoiseSpec("random-walk", 0.0, 1e-3))
    equalizer: EqualizerSpec = field(default_factory=EqualizerSpec)
    seed: int = 0
    output: str = "out"

    @property
    def gamma(self) -> float:
        return gamma_from_db(self.gamma_db_sq)

    @property
    def snr_grid(self) -> list[float]:
        n = int(round((self.snr_stop - self.snr_start) / self.snr_step)) + 1
        grid = [round(self.snr_start + k * self.snr_step, 9) for k in range(n)]
        return [g for g in grid if g <= self.snr_stop + 1e-9]


# -- config files -------------------------------------------------------------------


def _key_lines(text: str) -> dict:
    """``(section, key) -> line number`` for a flat INI text."""
    lines, section = {}, None
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip().lower()
            lines[(section, None)] = no
        elif section and s and not s.startswith(("#", ";")) and not raw[0].isspace():
            key = re.split(r"[=:]", s, maxsplit=1)[0].strip().lower()
            lines.setdefault((section, key), no)
    return lines


def _split(v: str) -> tuple:
    return tuple(t.strip() for t in re.split(r"[,\s]+", v) if t.strip())


def parse_config(text: str, source: str = "<config>", base_dir=None):
    """Parse and check a sweep config. Returns ``(config, diagnostics)``.

    ``config`` is ``None`` whenever a diagnostic was raised. The check is
    purely semantic: nothing is simulated.
    """
    diags: list[Diagnostic] = []
    lines = _key_lines(text)
    base_dir = Path(base_dir) if base_dir is not None else Path(".")

    def bad(section, key, msg):
        diags.append(Diagnostic(lines.get((section, key), lines.get((section, None))),
                                f"{section}.{key}" if key else f"[{section}]", msg, source))

    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        return None, [Diagnostic(line, "syntax", str(exc).splitlines()[0], source)]
    for sec in cp.sections():
        if sec not in _KEYS:
            bad(sec, None, f"unknown section (expected one of {', '.join(sorted(_KEYS))})")
            continue
        for key in cp[sec]:
            if key not in _KEYS[sec]:
                bad(sec, key, "unknown key")
    if not cp.has_section("sweep"):
        diags.append(Diagnostic(None, "[sweep]", "missing section", source))
        return None, diags

    def get(section, key, conv, default):
        if not cp.has_option(section, key):
            return default
        raw = cp.get(section, key).strip()
        try:
            return conv(raw)
        except (TypeError, ValueError):
            bad(section, key, f"cannot parse {raw!r} as {getattr(conv, '__name__', 'value')}")
            return default

    def boolean(v):
        if v.lower() in ("1", "yes", "true", "on"):
            return True
        if v.lower() in ("0", "no", "false", "off"):
            return False
        raise ValueError(v)

    def optional_float(v):
        return None if v.lower() in ("", "default", "none") else float(v)

    d = SweepConfig()
    channel = get("sweep", "channel", str, d.channel)
    if channel not in CHANNELS:
        bad("sweep", "channel", f"must be one of {', '.join(CHANNELS)}")
    strategies = get("sweep", "strategies", _split, d.strategies)
    if strategies == ("all",):
        strategies = STRATEGIES
    for s in strategies:
        if s not in STRATEGIES:
            bad("sweep", "strategies", f"unknown strategy {s!r} (known: {', '.join(STRATEGIES)})")
    if not strategies:
        bad("sweep", "strategies", "empty list")
    gdb = get("sweep", "gamma_db_sq", float, d.gamma_db_sq)
    if not MIN_GAMMA_DB_SQ - 1e-12 <= gdb <= 0:
        bad("sweep", "gamma_db_sq", f"must lie in [{MIN_GAMMA_DB_SQ:.4f}, 0] dB (gamma in [1/2, 1])")
    start = get("sweep", "snr_start", float, d.snr_start)
    stop = get("sweep", "snr_stop", float, d.snr_stop)
    step = get("sweep", "snr_step", float, d.snr_step)
    if not step > 0:
        bad("sweep", "snr_step", "must be positive")
    if not start < stop:
        bad("sweep", "snr_stop", f"must exceed snr_start ({start!r})")
    seed = get("sweep", "seed", int, d.seed)
    if not 0 <= seed < 2**63:
        bad("sweep", "seed", "must be a non-negative 63-bit integer")
    output = get("sweep", "output", str, d.output)

    consts = get("model", "constellations", _split, ())
    for name in consts:
        try:
            named_constellation(name)
        except (KeyError, ValueError) as exc:
            bad("model", "constellations", str(exc).strip("'\""))
    if channel == "transponder" and not consts:
        bad("model", "constellations", "transponder sweeps need at least one constellation")
    m_max = get("model", "m_max", int, d.m_max)
    if not 1 <= m_max <= 20:
        bad("model", "m_max", "must lie in [1, 20]")
    tp_path = get("model", "transponder", str, None)
    if tp_path is not None:
        full = Path(tp_path) if Path(tp_path).is_absolute() else base_dir / tp_path
        if not full.is_file():
            bad("model", "transponder", f"file not found: {full}")
        else:
            tp_path = str(full)
            try:
                tcp = configparser.ConfigParser(interpolation=None)
                tcp.read(full)
                if tcp.has_section("hpa"):
                    tab = hpa_table_path(tcp["hpa"], full.parent)
                    if tab is not None and not tab.is_file():
                        bad("model", "transponder", f"hpa table file not found: {tab}")
                if not diags:
                    load_transponder_spec(full)
            except (configparser.Error, KeyError, ValueError, OSError) as exc:
                bad("model", "transponder", f"{full}: {exc}")
    ibo = get("model", "ibo_db", optional_float, None)
    if ibo is not None and not 0 <= ibo <= 30:
        bad("model", "ibo_db", "must lie in [0, 30] dB")

    phase = d.phase
    pm = get("model", "phase_model", str, d.phase.model)
    p0 = get("model", "phase_initial", float, d.phase.initial_phase)
    ps = get("model", "phase_step_std", float, d.phase.step_std if pm == d.phase.model else 0.0)
    try:
        phase = PhaseNoiseSpec(pm, p0, ps)
    except ValueError as exc:
        bad("model", "phase_model" if "model" in str(exc) else "phase_step_std", str(exc))

    eq = d.equalizer
    try:
        eq = EqualizerSpec(
            taps=get("equalizer", "taps", int, eq.taps),
            algorithm=get("equalizer", "algorithm", str, eq.algorithm),
            step_or_forgetting=get("equalizer", "step_or_forgetting", optional_float, None),
            training_symbols=get("equalizer", "training_symbols", int, eq.training_symbols),
            decision_directed=get("equalizer", "decision_directed", boolean, eq.decision_directed))
    except ValueError as exc:
        msg = str(exc)
        key = ("taps" if "length" in msg else "training_symbols" if "training" in msg
               else "algorithm" if "algorithm" in msg else "step_or_forgetting")
        bad("equalizer", key, msg)
    n_sym = get("model", "n_symbols", int, d.n_symbols)
    need = eq.training_symbols + 10_000 + 2 * GUARD
    if channel == "transponder" and n_sym < need:
        bad("model", "n_symbols", f"must be at least {need} (training + 1e4 measured symbols + guards)")

    if diags:
        return None, diags
    cfg = SweepConfig(channel, tuple(strategies), float(gdb), float(start), float(stop), float(step),
                      tuple(c.lower() for c in consts), int(m_max), tp_path, int(n_sym), ibo, phase,
                      eq, int(seed), output)
    return cfg, []


def load_config(path) -> SweepConfig:
    path = Path(path)
    cfg, diags = parse_config(path.read_text(), str(path), path.parent)
    if diags:
        raise ConfigError(diags)
    return cfg


def validate_file(path) -> list[Diagnostic]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        return [Diagnostic(None, "file", str(exc), str(path))]
    return parse_config(text, str(path), path.parent)[1]


# -- evaluation -----------------------------------------------------------------------


def _transponder_task(args):
    """One (constellation, chain, snr) simulation; top level so that it pickles."""
    cfg, name, chain, sdb = args
    tp = load_transponder_spec(cfg.transponder)
    if chain == "single":
        link = LinkConfig.single_satellite(sdb, seed=cfg.seed)
    else:
        link = LinkConfig(sdb, cfg.gamma, phase_noise=cfg.phase, seed=cfg.seed)
    res = run_strategy_chain(Scenario(chain, name, link, tp, cfg.equalizer, cfg.n_symbols, cfg.ibo_db))
    return (res.rate.rate_bits, res.rate.stderr, res.pragmatic.rate_bits, res.pragmatic.stderr)


def _constellation_task(args):
    cfg, name, sdb = args
    c = named_constellation(name)
    s, g = db_to_linear(sdb), cfg.gamma
    single = constellation_mi_single(c, s)
    f1 = constellation_mi_single(c, 2 * s)
    f2 = constellation_mi_single(c, 2 * g * g * s)
    ala = constellation_mi_single(c, (1 + g * g) * s)
    out = {"single": (single.bits, single.error), "alamouti": (ala.bits, ala.error),
           "fdm": (0.5 * (f1.bits + f2.bits), 0.5 * math.hypot(f1.error, f2.error)),
           "fdm-pragmatic": (f2.bits, f2.error)}
    if {"joint", "joint-pragmatic"} & set(cfg.strategies):
        _, i2, ij = constellation_mi_joint(c, c, g, s)
        out["joint"] = (ij.bits, ij.error)
        out["joint-pragmatic"] = (ij.bits, ij.error) if ij.bits <= 2 * i2.bits else (2 * i2.bits, 2 * i2.error)
    return out


def _pool_map(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map keeps grid order; the collector below writes in that order
        return list(pool.map(fn, tasks))


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> dict:
    """Evaluate the sweep. Returns ``{strategy: [RateCurve, ...]}``."""
    grid = cfg.snr_grid
    curves: dict[str, list[RateCurve]] = {}
    if cfg.channel == "awgn-avg":
        for st in cfg.strategies:
            f = aw.STRATEGY_FUNCS[st]
            curves[st] = [RateCurve.from_arrays(st, grid, [float(f(db_to_linear(s), cfg.gamma)) for s in grid],
                                                label="gaussian")]
        return curves
    if cfg.channel == "awgn-peak" and not cfg.constellations:
        rates = peak_strategy_rates(grid, cfg.gamma, cfg.m_max)
        return {st: [replace(rates[st], label="rings")] for st in cfg.strategies}
    if cfg.channel == "awgn-peak":
        tasks = [(cfg, name, s) for name in cfg.constellations for s in grid]
        res = _pool_map(_constellation_task, tasks, jobs)
        for st in cfg.strategies:
            per = []
            for i, name in enumerate(cfg.constellations):
                block = res[i * len(grid):(i + 1) * len(grid)]
                per.append(RateCurve.from_arrays(st, grid, [b[st][0] for b in block],
                                                 [b[st][1] for b in block], label=name))
            curves[st] = _with_envelope(per)
        return curves
    chains = []
    for st in cfg.strategies:
        ch = st.replace("-pragmatic", "")
        if ch not in chains:
            chains.append(ch)
    tasks = [(cfg, name, ch, s) for name in cfg.constellations for ch in chains for s in grid]
    res = _pool_map(_transponder_task, tasks, jobs)
    lookup = dict(zip(((t[1], t[2], t[3]) for t in tasks), res))
    for st in cfg.strategies:
        ch = st.replace("-pragmatic", "")
        k = 2 if st.endswith("-pragmatic") else 0
        per = [RateCurve.from_arrays(st, grid, [lookup[(name, ch, s)][k] for s in grid],
                                     [lookup[(name, ch, s)][k + 1] for s in grid], label=name)
               for name in cfg.constellations]
        curves[st] = _with_envelope(per)
    return curves


def _with_envelope(per):
    if len(per) < 2:
        return per
    env, _ = envelope(per)
    return per + [env]


def winners(curves) -> list[tuple[str, float, float]]:
    """Intervals ``(label, from_db, to_db)`` where each curve is the best one.

    Boundaries between neighbouring grid points are placed where the two
    winning curves cross (linear interpolation).
    """
    curves = [c for c in curves if c.label != "envelope"]
    env, labels = envelope(curves)
    grid = env.snr_db
    by = {c.label: c.rates for c in curves}
    out = []
    lo = float(grid[0])
    for k in range(1, len(grid)):
        a, b = labels[k - 1], labels[k]
        if a != b:
            da = by[a][k - 1] - by[b][k - 1]
            db = by[a][k] - by[b][k]
            t = da / (da - db) if da != db else 0.5
            x = float(grid[k - 1] + min(max(t, 0.0), 1.0) * (grid[k] - grid[k - 1]))
            out.append((a, lo, x))
            lo = x
    out.append((labels[-1], lo, float(grid[-1])))
    return out


# -- files ----------------------------------------------------------------------------


def curves_to_csv(curves) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in curves:
        for p in c.points:
            w.writerow((repr(float(p.snr_db)), repr(float(p.rate_bits)), repr(float(p.stderr)),
                        c.label))
    return buf.getvalue()


def curves_from_csv(text: str, strategy: str) -> list[RateCurve]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f"expected header {','.join(CSV_HEADER)}")
    groups: dict[str, list] = {}
    for no, r in enumerate(rows[1:], 2):
        if len(r) != 4:
            raise ValueError(f"line {no}: expected 4 fields, got {len(r)}")
        groups.setdefault(r[3], []).append((float(r[0]), float(r[1]), float(r[2])))
    return [RateCurve.from_arrays(strategy, [p[0] for p in pts], [p[1] for p in pts],
                                  [p[2] for p in pts], label=lab) for lab, pts in groups.items()]


def read_curves(path) -> list[RateCurve]:
    path = Path(path)
    return curves_from_csv(path.read_text(), path.stem)


def write_outputs(files: dict, out_dir) -> list[Path]:
    """Write ``{name: text or bytes}`` atomically: all files or none."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, data in files.items():
            tmp = out / f".{name}.partial"
            if isinstance(data, bytes):
                tmp.write_bytes(data)
            else:
                with open(tmp, "w", newline="") as fh:
                    fh.write(data)
            staged.append((tmp, out / name))
    except BaseException:
        for tmp, _ in staged:
            tmp.unlink(missing_ok=True)
        (out / f".{name}.partial").unlink(missing_ok=True)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)
    return [final for _, final in staged]


def sweep_files(curves: dict) -> dict:
    return {f"{st}.csv": curves_to_csv(cs) for st, cs in curves.items()}
