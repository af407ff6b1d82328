import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from colosat.cli import main
from colosat.core import RateCurve
from colosat.reproduce import RECIPES, reproduce
from colosat.sweep import (
    ConfigError,
    SweepConfig,
    curves_from_csv,
    curves_to_csv,
    load_config,
    parse_config,
    run_sweep,
    sweep_files,
    validate_file,
    winners,
    write_outputs,
)

AVG = """[sweep]
channel = awgn-avg
strategies = all
gamma_db_sq = 0
snr_start = -10
snr_stop = 25
snr_step = 0.5
seed = 3
"""


def test_parse_defaults():
    cfg, diags = parse_config(AVG)
    assert not diags
    assert cfg.gamma == 1.0 and len(cfg.snr_grid) == 71
    assert cfg.phase.model == "random-walk" and cfg.phase.step_std == 1e-3


def test_validate_messages(tmp_path):
    good = tmp_path / "good.ini"
    good.write_text(AVG)
    assert validate_file(good) == []
    bad = tmp_path / "bad.ini"
    bad.write_text(AVG.replace("snr_step = 0.5", "snr_step = 0"))
    (d,) = validate_file(bad)
    assert d.field == "sweep.snr_step" and d.line == 7
    assert str(d).startswith(f"{bad}:7: sweep.snr_step:")


def test_validate_collects_several_problems():
    text = AVG.replace("gamma_db_sq = 0", "gamma_db_sq = -9").replace("snr_stop = 25", "snr_stop = -20")
    text += "[model]\nwhatever = 1\n"
    _, diags = parse_config(text)
    fields = {d.field for d in diags}
    assert {"sweep.gamma_db_sq", "sweep.snr_stop", "model.whatever"} <= fields


def test_validate_missing_hpa_table(tmp_path):
    (tmp_path / "tp.ini").write_text(
        "[imux]\nbandwidth_3db_mhz = 44\n[hpa]\nmodel = lookup-table\ntable_file = curves/amp.txt\n"
        "[omux]\nbandwidth_3db_mhz = 38\n")
    cfg = tmp_path / "run.ini"
    cfg.write_text("[sweep]\nchannel = transponder\nstrategies = joint\n"
                   "[model]\nconstellations = qpsk\ntransponder = tp.ini\n")
    (d,) = validate_file(cfg)
    assert d.field == "model.transponder" and "curves/amp.txt" in d.message
    with pytest.raises(ConfigError):
        load_config(cfg)


def test_avg_sweep_equalities_at_balance():
    cfg, _ = parse_config(AVG)
    curves = run_sweep(cfg)
    j, f, a = (curves[s][0].rates for s in ("joint", "fdm", "alamouti"))
    assert np.max(np.abs(j - f)) < 1e-12 and np.array_equal(j, a)


def test_peak_sweep_joint_above_fdm():
    cfg = SweepConfig(channel="awgn-peak", strategies=("joint", "fdm"), gamma_db_sq=-6.0,
                      snr_start=-5.0, snr_stop=15.0, snr_step=5.0, m_max=4)
    curves = run_sweep(cfg)
    assert np.all(curves["joint"][0].rates >= curves["fdm"][0].rates)


@given(st.lists(st.tuples(st.floats(-30, 30), st.floats(0, 20), st.floats(0, 1)), min_size=1, max_size=20,
                unique_by=lambda t: t[0]))
def test_csv_round_trip(rows):
    rows.sort()
    c = RateCurve.from_arrays("joint", [r[0] for r in rows], [r[1] for r in rows], [r[2] for r in rows],
                              label="qpsk")
    (back,) = curves_from_csv(curves_to_csv([c]), "joint")
    assert back == c


def test_csv_header():
    c = RateCurve.from_arrays("single", [0.0], [1.0], label="gaussian")
    assert curves_to_csv([c]).splitlines()[0] == "snr_db,rate_bits,stderr,label"


def test_winners_intervals():
    grid = np.arange(0.0, 10.1, 1.0)
    a = RateCurve.from_arrays("joint", grid, 5 - 0.5 * grid, label="a")
    b = RateCurve.from_arrays("joint", grid, 0.5 * grid, label="b")
    iv = winners([a, b])
    assert [w for w, *_ in iv] == ["a", "b"]
    assert iv[0][2] == pytest.approx(5.0) and iv[1][1] == pytest.approx(5.0)


def test_write_outputs_all_or_nothing(tmp_path):
    class Boom(dict):
        def items(self):
            yield "a.csv", "x\n"
            raise RuntimeError("disk full")

    with pytest.raises(RuntimeError):
        write_outputs(Boom(), tmp_path / "o")
    assert not any((tmp_path / "o").glob("*")) if (tmp_path / "o").exists() else True


def test_cli_sweep_is_byte_identical(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text(AVG.replace("snr_step = 0.5", "snr_step = 2.5"))
    for d in ("a", "b"):
        assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / d), "--quiet"]) == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert "joint.csv" in names and "sweep.png" in names and "sweep.gp" in names
    for n in names:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()


def test_cli_invalid_config_leaves_nothing(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text(AVG.replace("snr_step = 0.5", "snr_step = -1"))
    out = tmp_path / "out"
    assert main(["sweep", "--config", str(cfg), "--out", str(out), "--quiet"]) != 0
    assert "snr_step" in capsys.readouterr().err
    assert not out.exists()


def test_cli_validate_and_region(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text(AVG)
    assert main(["validate", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out.strip() == "ok"
    assert main(["region", "--gamma-db-sq", "-6", "--snr-db", "0", "--quiet"]) == 0
    assert main(["region", "--gamma-db-sq", "-6", "--snr-db", "0"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("point,r1,r2\nA,") and "single_better=true" in text


def test_cli_unknown_figure(capsys):
    assert main(["reproduce", "fig99", "--quiet"]) != 0
    err = capsys.readouterr().err
    assert all(k in err for k in RECIPES)


def test_reproduce_fig3_bundle():
    b = reproduce("fig3", grid=np.arange(-10.0, 25.1, 5.0))
    assert "fig3.gp" in b.files and any(k.endswith(".csv") for k in b.files)
    assert "set output" in b.files["fig3.gp"]
    csvs = [v for k, v in b.files.items() if k.endswith(".csv")]
    assert all(v.startswith("snr_db,") for v in csvs)


def test_reproduce_rejects_irregular_grid():
    with pytest.raises(ValueError):
        reproduce("fig3", grid=(-10.0, 25.0, 5.0))


def test_reproduce_fig9_regions():
    b = reproduce("fig9")
    head, *rows = b.files["regions.csv"].splitlines()
    assert head == "snr_db,point,r1,r2"
    assert len(rows) == 5 * 6


def test_jobs_do_not_change_output():
    cfg = SweepConfig(channel="awgn-peak", strategies=("joint", "alamouti"), snr_start=0.0, snr_stop=10.0,
                      snr_step=5.0, m_max=3)
    one = sweep_files(run_sweep(cfg, 1))
    two = sweep_files(run_sweep(cfg, 2))
    assert one == two
