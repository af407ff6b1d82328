"""Command line front end.

Verbs::

    colosat sweep --config FILE [--out DIR]
    colosat reproduce ID [--out DIR]
    colosat validate --config FILE
    colosat region --channel awgn-avg|awgn-peak --gamma-db-sq G --snr-db S

Common flags: ``--seed``, ``--jobs``, ``--quiet``.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import replace
from pathlib import Path

log = logging.getLogger("colosat")


def _common(p):
    p.add_argument("--config", help="sweep configuration file (INI)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, default=None, help="base seed (overrides the config)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweep points")
    p.add_argument("--quiet", action="store_true", help="only report errors")


def build_parser() -> argparse.ArgumentParser:
    from .reproduce import RECIPES

    parser = argparse.ArgumentParser(prog="colosat", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("sweep", help="evaluate rate curves on an SNR grid")
    _common(p)
    p.add_argument("--no-plot", action="store_true", help="skip the PNG rendering")
    p = sub.add_parser("reproduce", help="regenerate a figure or table")
    p.add_argument("figure_id", help="one of: " + ", ".join(RECIPES))
    _common(p)
    p.add_argument("--no-plot", action="store_true", help="skip the PNG rendering")
    p = sub.add_parser("validate", help="check a configuration without running it")
    _common(p)
    p = sub.add_parser("region", help="print the MAC region landmarks")
    _common(p)
    p.add_argument("--channel", choices=("awgn-avg", "awgn-peak"), default="awgn-avg")
    p.add_argument("--gamma-db-sq", type=float, default=0.0)
    p.add_argument("--snr-db", type=float, required=True)
    return parser


def _sweep_panels(curves):
    from .plotting import Panel, Series

    series = []
    for st, cs in curves.items():
        for c in cs:
            series.append(Series(tuple(c.snr_db), tuple(c.rates), f"{st} {c.label}"))
    return [Panel("Sweep", "SNR [dB]", "spectral efficiency [bit/s/Hz]", tuple(series))]


def _render(files, panels, out, stem):
    from .plotting import gnuplot_script, render_png

    files[f"{stem}.gp"] = gnuplot_script(panels, f"{stem}.png")
    out.mkdir(parents=True, exist_ok=True)
    tmp = out / f".{stem}.png.partial"
    render_png(panels, tmp)
    return tmp


def _finish(files, out, png_tmp, stem):
    from .sweep import write_outputs

    try:
        written = write_outputs(files, out)
    except BaseException:
        if png_tmp is not None:
            png_tmp.unlink(missing_ok=True)
        raise
    if png_tmp is not None:
        png_tmp.replace(out / f"{stem}.png")
        written.append(out / f"{stem}.png")
    return written


def cmd_sweep(args) -> int:
    from .sweep import load_config, run_sweep, sweep_files

    if not args.config:
        raise SystemExit("sweep needs --config")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    out = Path(args.out or cfg.output)
    log.info("sweep %s over %d points", cfg.channel, len(cfg.snr_grid))
    curves = run_sweep(cfg, args.jobs)
    files = sweep_files(curves)
    png = None if args.no_plot else _render(files, _sweep_panels(curves), out, "sweep")
    for p in _finish(files, out, png, "sweep"):
        log.info("wrote %s", p)
    return 0


def cmd_reproduce(args) -> int:
    from .reproduce import RECIPES, reproduce

    if args.figure_id not in RECIPES:
        print(f"unknown id {args.figure_id!r}; available: {', '.join(RECIPES)}", file=sys.stderr)
        return 2
    out = Path(args.out or Path("out") / args.figure_id)
    b = reproduce(args.figure_id, seed=args.seed or 0, jobs=args.jobs)
    png = None
    if not args.no_plot:
        from .plotting import render_png

        out.mkdir(parents=True, exist_ok=True)
        png = out / f".{args.figure_id}.png.partial"
        render_png(b.panels, png)
    for p in _finish(b.files, out, png, args.figure_id):
        log.info("wrote %s", p)
    for lab, a, c in b.intervals:
        log.info("%-8s %7.2f .. %7.2f dB", lab, a, c)
    return 0


def cmd_validate(args) -> int:
    from .sweep import validate_file

    if not args.config:
        print("validate needs --config", file=sys.stderr)
        return 2
    diags = validate_file(args.config)
    if not diags:
        print("ok")
        return 0
    for d in diags:
        print(d)
    return 1


def cmd_region(args) -> int:
    from . import analytic_awgn as aw
    from .core import db_to_linear, gamma_from_db
    from .peak_power import RingDistribution, peak_region

    gamma, snr = gamma_from_db(args.gamma_db_sq), db_to_linear(args.snr_db)
    if args.channel == "awgn-avg":
        reg = aw.awgn_region(snr, gamma)
    else:
        one = RingDistribution.constant_envelope()
        reg = peak_region(one, one, gamma, snr)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("point", "r1", "r2"))
    for name, (r1, r2) in reg.points.items():
        w.writerow((name, repr(float(r1)), repr(float(r2))))
    text = buf.getvalue()
    if args.out:
        from .sweep import write_outputs

        write_outputs({"region.csv": text}, args.out)
    if not args.quiet:
        sys.stdout.write(text)
        print(f"# pragmatic={reg.pragmatic!r} single_better={str(reg.single_better).lower()}")
    return 0


COMMANDS = {"sweep": cmd_sweep, "reproduce": cmd_reproduce, "validate": cmd_validate, "region": cmd_region}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    if args.jobs < 1:
        print("--jobs must be at least 1", file=sys.stderr)
        return 2
    from .sweep import ConfigError

    try:
        return COMMANDS[args.verb](args)
    except ConfigError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
