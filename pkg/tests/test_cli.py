"""CLI tests: config parsing and diagnostics, sweep execution, CSV schema,
and the console entry point."""

import argparse

import pytest

from busnoc.cli import (
    CSV_COLUMNS,
    CSV_SCHEMA_COMMENT,
    SweepSpec,
    _routing_token,
    build_config,
    main,
    parse_config_file,
    report_row,
    run_sweep,
    write_csv,
)
from busnoc.core import ConfigError, Recovery, Routing, SimConfig, Traffic


def _write(tmp_path, text, name="cfg.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_parse_config_file(tmp_path):
    p = _write(
        tmp_path,
        """
        # comment line
        mesh_x = 8
        routing = odd_even   # inline comment
        traffic = bit_reversal
        recovery = bus
        pir = 0.015
        injection_limit = none
        """,
    )
    v = parse_config_file(p)
    assert v["mesh_x"] == 8
    assert v["routing"] is Routing.ODD_EVEN
    assert v["traffic"] is Traffic.BIT_REVERSAL
    assert v["recovery"] is Recovery.BUS
    assert v["pir"] == 0.015
    assert v["injection_limit"] is None


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("mesh_x 8", "expected key = value"),
        ("bogus_key = 1", "unknown config key"),
        ("routing = zigzag", "invalid value"),
        ("mesh_x = many", "invalid value"),
    ],
)
def test_parse_config_file_diagnostics(tmp_path, text, fragment):
    p = _write(tmp_path, text)
    with pytest.raises(ConfigError, match=fragment):
        parse_config_file(p)


def test_build_config_flags_override_file(tmp_path):
    p = _write(tmp_path, "mesh_x = 8\nmesh_y = 8\nseed = 3\n")
    ns = argparse.Namespace(config=str(p), mesh_x="2", threshold_log2="4")
    cfg = build_config(ns)
    assert (cfg.mesh_x, cfg.mesh_y, cfg.seed) == (2, 8, 3)
    assert cfg.threshold == 16


def test_invalid_combination_reports_config_error(tmp_path):
    p = _write(tmp_path, "traffic = bit_reversal\nmesh_x = 3\nmesh_y = 3\n")
    ns = argparse.Namespace(config=str(p))
    with pytest.raises(ConfigError, match="power-of-two"):
        build_config(ns)


def test_threshold_zero_rejected(tmp_path):
    p = _write(tmp_path, "threshold_log2 = 0\n")
    with pytest.raises(ConfigError, match="threshold_log2"):
        build_config(argparse.Namespace(config=str(p)))


def test_routing_tokens():
    assert _routing_token("xy") == (Routing.XY, Recovery.NONE)
    assert _routing_token("tfar+bus") == (Routing.TFAR, Recovery.BUS)
    assert _routing_token("West_First") == (Routing.WEST_FIRST, Recovery.NONE)
    with pytest.raises(ConfigError):
        _routing_token("zigzag")


def test_report_row_empty_report():
    row = report_row("xy", "uniform", 0.01, 2, None, "boom")
    assert row[:4] == ["xy", "uniform", "0.01", "2"]
    assert row[4:13] == [""] * 9
    assert row[13] == "boom"
    assert len(row) == len(CSV_COLUMNS)


def _tiny_spec(**kwargs):
    base = SimConfig(mesh_x=2, mesh_y=2, sim_cycles=400)
    defaults = dict(
        base=base,
        pirs=(0.01, 0.05),
        routings=("xy",),
        traffics=(Traffic.UNIFORM,),
        seeds=(0, 1),
    )
    defaults.update(kwargs)
    return SweepSpec(**defaults)


def test_run_sweep_grid_and_order():
    rows = run_sweep(_tiny_spec())
    assert len(rows) == 4
    keys = [(r[0], r[1], float(r[2]), int(r[3])) for r in rows]
    assert keys == sorted(keys)
    for r in rows:
        assert r[13] == ""  # no errors
        assert int(r[8]) > 0  # packets delivered


def test_run_sweep_isolates_failing_cells():
    # bit reversal needs a power-of-two node count; 3x3 cells must come
    # back as error rows without aborting the sweep.
    base = SimConfig(mesh_x=3, mesh_y=3, sim_cycles=200)
    spec = _tiny_spec(base=base, pirs=(0.01,),
                      traffics=(Traffic.UNIFORM, Traffic.BIT_REVERSAL),
                      seeds=(0,))
    rows = run_sweep(spec)
    by_traffic = {r[1]: r for r in rows}
    assert by_traffic["uniform"][13] == ""
    assert "ConfigError" in by_traffic["bit_reversal"][13]


def test_write_csv_schema(tmp_path):
    rows = run_sweep(_tiny_spec(pirs=(0.01,), seeds=(0,)))
    out = tmp_path / "sweep.csv"
    write_csv(out, rows, _tiny_spec().base)
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_SCHEMA_COMMENT
    assert lines[1].startswith("# generated: ")
    assert lines[2].startswith("# config: ")
    assert lines[3] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4 + len(rows)


def test_write_csv_reproducible_without_timestamp(tmp_path):
    spec = _tiny_spec()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(a, run_sweep(spec), spec.base, timestamp=False)
    write_csv(b, run_sweep(spec), spec.base, timestamp=False)
    assert a.read_bytes() == b.read_bytes()


def test_main_run_writes_csv(tmp_path, capsys):
    out = tmp_path / "run.csv"
    log = tmp_path / "run.log"
    rc = main([
        "run", "--mesh_x", "2", "--mesh_y", "2", "--pir", "0.05",
        "--sim_cycles", "400", "--out", str(out), "--log", str(log),
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_SCHEMA_COMMENT
    assert len(lines) == 5  # comments + header + one row
    assert log.read_text().strip()
    assert "avg_latency_cycles" in capsys.readouterr().out


def test_main_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main([
        "sweep", "--mesh_x", "2", "--mesh_y", "2", "--sim_cycles", "300",
        "--pirs", "0.01,0.02", "--routings", "xy,tfar+bus",
        "--traffics", "uniform", "--seeds", "0", "--out", str(out),
    ])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4 + 2 * 2


def test_main_scenario(capsys):
    rc = main(["scenario", "deadlock-bus"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "delivered 4/4" in out
    assert "bus recoveries 1" in out


def test_main_config_error_exit_code(capsys):
    rc = main(["run", "--mesh_x", "0"])
    assert rc == 2
    assert "config error" in capsys.readouterr().err
