#!/usr/bin/env python3
"""Show why the long channel needs a buffer and a Schmitt trigger.

A bare microcontroller pin (10 kOhm, 30 pF) loads the channel enough to
kill the signal past about 70 cm. A unity-gain buffer presents nearly
nothing to the line, and a Schmitt trigger snaps the recovered analog
levels back to clean logic.
"""

from pathlib import Path

import numpy as np

from ionoline import (
    SchmittConfig,
    Waveform,
    buffer_apply,
    BufferConfig,
    calibrated_channel,
    propagate,
    receiver_load,
    schmitt_apply,
    schmitt_thresholds,
    transfer_gain,
    uart_encode,
    UartConfig,
)
from ionoline.svgplot import write_plot

OUT = Path(__file__).parent / "out"


def main() -> None:
    OUT.mkdir(exist_ok=True)
    spec = calibrated_channel(1.4)

    print(f"1.4 m channel, bulk resistance {spec.r_bulk / 1e3:.0f} kOhm\n")
    freqs = np.logspace(3, 8, 201)
    for conditioned, label in ((False, "bare pin"), (True, "buffered")):
        load = receiver_load(conditioned)
        gain = np.abs(transfer_gain(spec, load, freqs))
        idx = np.searchsorted(freqs, 1e7)
        print(f"  {label:9s}: load {load.resistance:,.0f} Ohm, "
              f"gain at 10 MHz = {gain[idx]:.3f}")

    # push one UART frame through and look at the waveforms
    uart = UartConfig(baud=9600)
    fs = 1e6
    wave = uart_encode(b"\xa5", uart, fs, lead_idle_bits=2, tail_idle_bits=2)

    bare = propagate(spec, receiver_load(False), wave)
    print(f"\nBare receiver peak after the channel: {bare.samples.max():.2f} V"
          f" (threshold 2.5 V, so nothing decodes)")

    buffered = propagate(spec, receiver_load(True), wave)
    recovered = buffer_apply(BufferConfig(), buffered)
    squared, _ = schmitt_apply(SchmittConfig(), recovered)
    v_fall, v_rise = schmitt_thresholds(SchmittConfig())
    print(f"Buffered peak: {recovered.samples.max():.2f} V, Schmitt"
          f" thresholds {v_fall:.2f}/{v_rise:.2f} V, output swings"
          f" {squared.samples.min():.1f} to {squared.samples.max():.1f} V")

    t = wave.t * 1e3
    write_plot(OUT / "receiver_conditioning.svg",
               [("line drive", t, wave.samples),
                ("bare pin", t, bare.samples),
                ("buffered", t, recovered.samples),
                ("after schmitt", t, squared.samples)],
               title="One UART frame, 1.4 m channel",
               xlabel="time (ms)", ylabel="volts")
    print(f"\nWrote receiver_conditioning.svg to {OUT}/")


if __name__ == "__main__":
    main()
