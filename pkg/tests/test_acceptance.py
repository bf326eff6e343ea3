"""End-to-end acceptance checks, one test per shipped capability.

Run with `pytest -v tests/test_acceptance.py` to get a single pass/fail
line per criterion. Each test also prints a short evidence line (visible
with -s) and asserts its own wall-clock budget.
"""

import time

import numpy as np
import pytest

from ionoline import (
    CellConfig,
    DuplexConfig,
    LinkConfig,
    LoadModel,
    SchmittConfig,
    SchmittState,
    UartConfig,
    Waveform,
    calibrated_channel,
    cycle,
    fit_channel,
    impedance,
    knob_demo,
    link_matrix,
    parse_scenario,
    power_budget,
    propagate,
    receiver_load,
    run_link,
    schmitt_apply,
    schmitt_thresholds,
    simulate,
    sine,
    sweep_grid,
    terminal_voltage,
    tone_amplitude,
    transfer_gain,
    uart_decode,
    uart_encode,
    write_trace_csv,
)
from ionoline.duplex import check_trace
from ionoline.link import SUPPORTED_BAUDS


def test_criterion_1_impedance_magnitude_curve():
    t0 = time.perf_counter()
    freqs = sweep_grid()
    for length, r_plateau in ((0.2, 2e3), (1.4, 20e3)):
        spec = calibrated_channel(length)
        mag = np.abs(impedance(spec, freqs))
        # high-frequency plateau within 10% of the calibrated bulk value
        assert abs(mag[-1] - r_plateau) / r_plateau <= 0.10
        # magnitude never rises with frequency anywhere on the grid
        assert np.all(np.diff(mag) <= 1e-9)
        # flat across the band the links occupy
        ratio = mag[freqs == 2e3][0] / mag[freqs == 1e6][0]
        assert ratio <= 1.10
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    print(f"criterion 1: PASS (plateaus at both anchors, "
          f"band flatness ratio <= 1.10, {elapsed:.2f}s)")


def test_criterion_2_schmitt_hysteresis():
    t0 = time.perf_counter()
    cfg = SchmittConfig()
    v_falling, v_rising = schmitt_thresholds(cfg)
    assert abs(v_falling - 1.9) <= 0.25
    assert abs(v_rising - 3.2) <= 0.25
    assert v_rising - v_falling > 1.0
    rng = np.random.default_rng(112358)
    for _ in range(1000):
        wave = Waveform(sample_rate=1e6,
                        samples=rng.uniform(0.0, 5.0, rng.integers(20, 200)))
        out, _ = schmitt_apply(cfg, wave)
        assert set(np.unique(out.samples)) <= {cfg.v_out_low, cfg.v_out_high}
        high = out.samples == cfg.v_out_high
        rising = np.flatnonzero(~high[:-1] & high[1:]) + 1
        falling = np.flatnonzero(high[:-1] & ~high[1:]) + 1
        assert np.all(wave.samples[rising] > v_rising)
        assert np.all(wave.samples[falling] < v_falling)
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    print(f"criterion 2: PASS (thresholds {v_falling:.3f}/{v_rising:.3f} V, "
          f"1000 random sequences legal, {elapsed:.2f}s)")


def test_criterion_3_receiver_frequency_response():
    t0 = time.perf_counter()
    spec = calibrated_channel(1.4)
    bare = receiver_load(False)
    # a bare pin loses the 10 MHz band almost entirely
    g0 = abs(transfer_gain(spec, bare, 0.0))
    g10m = abs(transfer_gain(spec, bare, 10e6))
    assert g10m / g0 < 0.1
    # its corner sits within a factor of two of 1 MHz
    r_par = 1.0 / (1.0 / spec.r_bulk + 1.0 / bare.resistance)
    f_c = 1.0 / (2 * np.pi * r_par * bare.capacitance)
    assert abs(transfer_gain(spec, bare, f_c)) == pytest.approx(g0 / np.sqrt(2),
                                                                rel=1e-9)
    assert 0.5e6 <= f_c <= 2e6
    # the buffered receiver holds at least 95% of full gain to 10 MHz
    buffered = receiver_load(True)
    freqs = np.logspace(1, 7, 400)
    gains = np.abs(transfer_gain(spec, buffered, freqs))
    assert np.min(gains) >= 0.95
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    print(f"criterion 3: PASS (bare 10 MHz ratio {g10m / g0:.3f}, corner "
          f"{f_c / 1e6:.2f} MHz, buffered min gain {np.min(gains):.3f}, "
          f"{elapsed:.2f}s)")


def test_criterion_4_link_matrix_boundary():
    t0 = time.perf_counter()
    cond = link_matrix(conditioned=True)
    assert len(cond) == 42
    for _, _, _, stats in cond:
        assert stats.packets_sent == 8
        assert stats.packets_lost == 0
        assert stats.bit_errors == 0
    bare = link_matrix(conditioned=False)
    outcomes = {}
    for length, baud, _, stats in bare:
        assert stats.packets_lost in (0, stats.packets_sent)  # all or nothing
        lost = stats.packets_lost == stats.packets_sent
        assert lost == (length >= 0.8), (length, baud)
        outcomes.setdefault(length, set()).add(lost)
    # the boundary is a property of the channel, not of the baud rate
    assert all(len(v) == 1 for v in outcomes.values())
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    print(f"criterion 4: PASS (42 conditioned cells clean, bare boundary at "
          f"0.8 m across all bauds, {elapsed:.1f}s)")


def test_criterion_5_knob_to_led_pipeline():
    t0 = time.perf_counter()
    for pot in range(1024):
        assert knob_demo(pot) == pot * 12 // 1024
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    print(f"criterion 5: PASS (all 1024 settings decode to the right LED "
          f"count, {elapsed:.1f}s)")


def test_criterion_6_battery_operating_point():
    t0 = time.perf_counter()
    cfg = CellConfig()
    assert terminal_voltage(cfg, 0.2, 0.124) == pytest.approx(2.200, abs=1e-12)
    source_w = 2.2 * 0.124
    assert source_w == pytest.approx(0.270, rel=0.02)
    budget = power_budget(source_w)
    assert budget.margin_w == pytest.approx(0.16824, rel=1e-9)
    assert budget.sufficient
    trace = cycle(cfg, n_cycles=5)
    assert trace.half_cycles == 10
    assert trace.soc.min() >= 0.05 - 1e-12
    assert trace.soc.max() <= 0.95 + 1e-12
    dt = np.diff(trace.t_s)
    e_net = -np.sum(trace.voltage_v[1:] * trace.current_a[1:] * dt)
    loss = np.sum(trace.current_a[1:] ** 2
                  * 2 * cfg.internal_resistance_ohm * dt)
    assert e_net == pytest.approx(loss, rel=1e-2)
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    print(f"criterion 6: PASS (2.200 V at 124 mA, {source_w * 1e3:.1f} mW "
          f"source, {budget.margin_w * 1e3:.0f} mW margin, 10 half-cycles, "
          f"{elapsed:.1f}s)")


def test_criterion_7_failover_protocol(tmp_path):
    t0 = time.perf_counter()
    cfg = DuplexConfig()
    healthy = simulate(cfg, t_end=60.0)
    check_trace(healthy)
    starts = [ev.node for ev in healthy if ev.event == "blink_start"]
    assert all(a != b for a, b in zip(starts, starts[1:]))
    assert not any(ev.event == "mode_switch" for ev in healthy)

    cut = simulate(cfg, parse_scenario("10.0 inject power_off right"),
                   t_end=40.0)
    check_trace(cut)
    switches = [ev for ev in cut if ev.event == "mode_switch"]
    assert len(switches) == 1 and switches[0].node == "left"
    last_rx = max(ev.t_s for ev in cut
                  if ev.event == "pulse_received" and ev.node == "left")
    assert switches[0].t_s - last_rx <= cfg.peer_timeout_s + 1e-9

    severed = simulate(cfg, parse_scenario(
        "10.0 inject channel_severed left\n"
        "10.0 inject channel_severed right"), t_end=40.0)
    check_trace(severed)
    assert sum(ev.event == "mode_switch" for ev in severed) == 2

    write_trace_csv(tmp_path / "a.csv", simulate(cfg, t_end=60.0))
    write_trace_csv(tmp_path / "b.csv", simulate(cfg, t_end=60.0))
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    print(f"criterion 7: PASS (alternation, single failover within "
          f"{cfg.peer_timeout_s:.1f}s, severed strands both, byte-identical "
          f"traces, {elapsed:.1f}s)")


def test_criterion_8_simulation_fidelity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8128)

    # 1000 random payloads through the framing codec, all bauds exercised
    for i in range(1000):
        baud = SUPPORTED_BAUDS[i % len(SUPPORTED_BAUDS)]
        cfg = UartConfig(baud=baud)
        fs = 64 * baud
        payload = bytes(rng.integers(0, 256, size=rng.integers(1, 17)).tolist())
        wave = uart_encode(payload, cfg, fs, lead_idle_bits=2.0,
                           tail_idle_bits=2.0)
        decoded, framing = uart_decode(wave, cfg, threshold=2.5)
        assert decoded == payload and framing == 0

    # time-domain propagation agrees with the analytic gain within 2%
    for _ in range(10):
        spec = calibrated_channel(rng.uniform(0.2, 1.4))
        load = LoadModel(resistance=10 ** rng.uniform(3.7, 6.0),
                         capacitance=rng.uniform(1e-12, 100e-12))
        ratio = int(rng.integers(20, 65))
        f0 = 10 ** rng.uniform(4.0, 6.0)
        wave = sine(1.0, f0, duration=256 / f0, sample_rate=ratio * f0)
        measured = tone_amplitude(propagate(spec, load, wave), f0, skip=64 / f0)
        assert measured == pytest.approx(abs(transfer_gain(spec, load, f0)),
                                         rel=2e-2)

    # the resistance fit reproduces exact lines to 1e-9 relative
    for _ in range(20):
        slope = rng.uniform(1e3, 5e4)
        intercept = rng.uniform(0.0, 2e3)
        lengths = rng.uniform(0.1, 2.0, size=5)
        pts = [(l, slope * l + intercept) for l in lengths]
        got_slope, got_intercept = fit_channel(pts, constrain_contact_nonneg=False)
        assert got_slope == pytest.approx(slope, rel=1e-9)
        assert got_intercept == pytest.approx(intercept, rel=1e-6, abs=1e-6)

    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    print(f"criterion 8: PASS (1000 codec roundtrips, 10 propagation "
          f"cross-checks within 2%, exact fit recovery, {elapsed:.1f}s)")
