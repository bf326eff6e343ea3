"""Command line reports: files, formats, exit codes, reproducibility."""

import json
import subprocess
import sys

import numpy as np
import pytest


def run_cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "ionoline", *args],
                          cwd=cwd, capture_output=True, text=True)


def read_csv_column(path, column):
    lines = path.read_text().splitlines()
    idx = lines[0].split(",").index(column)
    return [row.split(",")[idx] for row in lines[1:]]


def test_impedance_writes_one_csv_per_length(tmp_path):
    res = run_cli("impedance", cwd=tmp_path)
    assert res.returncode == 0
    csvs = sorted(tmp_path.glob("impedance_*.csv"))
    assert {p.name for p in csvs} == {
        "impedance_0.2m.csv", "impedance_0.4m.csv", "impedance_0.6m.csv",
        "impedance_0.8m.csv", "impedance_1m.csv", "impedance_1.2m.csv",
        "impedance_1.4m.csv"}
    assert (tmp_path / "impedance.svg").exists()
    for p in csvs:
        lines = p.read_text().splitlines()
        assert lines[0] == "freq_hz,z_real_ohm,z_imag_ohm,z_mag_ohm"
        assert len(lines) == 477
    # longest tube plateaus at its bulk resistance near 20 kohm
    mags = [float(v) for v in
            read_csv_column(tmp_path / "impedance_1.4m.csv", "z_mag_ohm")]
    assert mags[-1] == pytest.approx(20e3, rel=0.05)
    assert all(a >= b - 1e-9 for a, b in zip(mags, mags[1:]))
    manifest = json.loads((tmp_path / "impedance_manifest.json").read_text())
    assert manifest["command"] == "impedance"
    assert "impedance_1.4m.csv" in manifest["outputs"]


def test_impedance_requires_lengths(tmp_path):
    res = run_cli("impedance", "--lengths", cwd=tmp_path)
    assert res.returncode == 2
    assert "length" in res.stderr


def test_impedance_csv_format_skips_svg(tmp_path):
    res = run_cli("impedance", "--lengths", "0.6", "--format", "csv",
                  cwd=tmp_path)
    assert res.returncode == 0
    assert (tmp_path / "impedance_0.6m.csv").exists()
    assert not (tmp_path / "impedance.svg").exists()


def test_freqresponse_both_receiver_styles(tmp_path):
    assert run_cli("freqresponse", "--length", "1.4", cwd=tmp_path).returncode == 0
    assert run_cli("freqresponse", "--length", "1.4", "--conditioned",
                   cwd=tmp_path).returncode == 0
    bare = tmp_path / "freqresponse_unconditioned.csv"
    cond = tmp_path / "freqresponse_conditioned.csv"
    for path in (bare, cond):
        lines = path.read_text().splitlines()
        assert lines[0] == "freq_hz,gain_mag"
        assert len(lines) == 102
    gain = {float(r.split(",")[0]): float(r.split(",")[1])
            for r in bare.read_text().splitlines()[1:]}
    assert gain[1e7] < 0.1
    gain_c = {float(r.split(",")[0]): float(r.split(",")[1])
              for r in cond.read_text().splitlines()[1:]}
    assert min(v for f, v in gain_c.items() if f <= 1e7) >= 0.95


def test_linkmatrix_conditioned_is_lossless(tmp_path):
    res = run_cli("linkmatrix", "--conditioned", cwd=tmp_path)
    assert res.returncode == 0
    path = tmp_path / "linkmatrix_conditioned.csv"
    lines = path.read_text().splitlines()
    assert lines[0] == ("length_m,baud,conditioned,sent,received,lost,"
                        "bit_errors,framing_errors")
    assert len(lines) == 1 + 7 * 6
    lost = [int(v) for v in read_csv_column(path, "lost")]
    assert lost == [0] * 42


def test_linkmatrix_bare_receiver_dies_at_point_eight(tmp_path):
    res = run_cli("linkmatrix", cwd=tmp_path)
    assert res.returncode == 0
    path = tmp_path / "linkmatrix_unconditioned.csv"
    rows = [r.split(",") for r in path.read_text().splitlines()[1:]]
    for length_s, baud_s, _, sent_s, _, lost_s, *_ in rows:
        if float(length_s) >= 0.8:
            assert lost_s == sent_s == "8", (length_s, baud_s)
        else:
            assert lost_s == "0", (length_s, baud_s)


def test_knob_prints_led_count(tmp_path):
    res = run_cli("knob", "512", cwd=tmp_path)
    assert res.returncode == 0
    assert res.stdout.strip() == "6"
    assert (tmp_path / "knob_manifest.json").exists()


def test_knob_rejects_out_of_range(tmp_path):
    res = run_cli("knob", "1024", cwd=tmp_path)
    assert res.returncode == 2
    assert "pot_value" in res.stderr


def test_battery_cycle_report(tmp_path):
    res = run_cli("battery", "--cycles", "1", cwd=tmp_path)
    assert res.returncode == 0
    lines = (tmp_path / "battery_cycles.csv").read_text().splitlines()
    assert lines[0] == "t_s,soc,voltage_v,current_a,phase"
    assert lines[1] == "0,0.05,2.525,-0.124,charge"
    assert len(lines) == 1 + 7202
    assert (tmp_path / "battery_cycles.svg").exists()


def test_duplex_trace_with_and_without_faults(tmp_path):
    res = run_cli("duplex", "--t-end", "20", cwd=tmp_path)
    assert res.returncode == 0
    clean = (tmp_path / "duplex_trace.csv").read_text()
    assert "mode_switch" not in clean

    (tmp_path / "faults.txt").write_text("5.0 inject power_off right\n")
    res = run_cli("duplex", "faults.txt", "--t-end", "20", cwd=tmp_path)
    assert res.returncode == 0
    rows = (tmp_path / "duplex_trace.csv").read_text().splitlines()
    assert rows[0] == "t_s,node,event"
    assert sum("mode_switch" in r for r in rows) == 1


def test_outputs_are_byte_identical_across_runs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    for cwd in (a, b):
        assert run_cli("impedance", "--lengths", "0.8", cwd=cwd).returncode == 0
        assert run_cli("duplex", "--t-end", "10", cwd=cwd).returncode == 0
    for name in ("impedance_0.8m.csv", "impedance.svg",
                 "impedance_manifest.json", "duplex_trace.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_calibration_file_is_picked_up(tmp_path):
    # doubling the bare receiver resistance moves the low-frequency gain
    (tmp_path / "calibration.txt").write_text(
        "load.unconditioned.r_ohm = 20000\n")
    assert run_cli("freqresponse", "--length", "1.4", cwd=tmp_path).returncode == 0
    rows = (tmp_path / "freqresponse_unconditioned.csv").read_text().splitlines()
    first = rows[1].split(",")
    assert float(first[1]) == pytest.approx(20e3 / 40e3, rel=1e-3)
    manifest = json.loads((tmp_path / "freqresponse_manifest.json").read_text())
    assert manifest["calibration_version"] != "builtin-1"


def test_missing_calibration_file_fails_cleanly(tmp_path):
    res = run_cli("--calibration", "absent.txt", "knob", "3", cwd=tmp_path)
    assert res.returncode == 2
    assert "absent.txt" in res.stderr


def test_no_command_shows_usage(tmp_path):
    res = run_cli(cwd=tmp_path)
    assert res.returncode == 2
    assert "usage" in res.stderr.lower()
