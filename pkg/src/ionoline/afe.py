"""Analog front end: receiver loads, unity buffer, Schmitt trigger.

Two receiver configurations exist. Unconditioned, the channel drives a
digital input pin directly and the pin's modest resistance both attenuates
the signal and, with the wiring parasitics, forms the ~1 MHz rolloff.
Conditioned, a wideband unity-gain buffer is mounted at the channel
terminus: the channel then sees only the buffer's high-impedance input,
and the buffer's low-impedance output drives a non-inverting Schmitt
trigger that regenerates clean logic levels.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from .calibration import DEFAULT_CALIBRATION, Calibration
from .errors import AliasingError, InvalidInputError
from .waveform import Waveform


@dataclass(frozen=True)
class LoadModel:
    """Receiver load: resistance (Ohm, may be inf) parallel to capacitance (F)."""

    resistance: float
    capacitance: float = 0.0

    def __post_init__(self):
        if not self.resistance > 0:
            raise InvalidInputError(f"resistance must be > 0, got {self.resistance}")
        if self.capacitance < 0:
            raise InvalidInputError("capacitance must be >= 0")


@dataclass(frozen=True)
class SchmittConfig:
    """Non-inverting Schmitt trigger around a rail-to-rail comparator.

    r1 feeds back from the output, r2 ties the input to the signal; the
    reference sits on the inverting pin. Output swings between the two
    saturation levels v_out_low/v_out_high.
    """

    r1: float = 3_300.0
    r2: float = 10_000.0
    v_ref: float = 2.5
    v_out_low: float = 0.8
    v_out_high: float = 4.8

    def __post_init__(self):
        if not (self.r1 > 0 and self.r2 > 0):
            raise InvalidInputError("r1 and r2 must be > 0")
        if not self.v_out_low < self.v_ref < self.v_out_high:
            raise InvalidInputError("need v_out_low < v_ref < v_out_high")


class SchmittState(enum.Enum):
    LOW = "low"
    HIGH = "high"


@dataclass(frozen=True)
class BufferConfig:
    """Unity-gain buffer: single-pole bandwidth, high-impedance input.

    The input load is what the channel sees once the buffer replaces the
    direct pin connection. A follower bootstraps its own input capacitance,
    so the effective value is a fraction of a picofarad.
    """

    bandwidth_hz: float = 1e9
    input_load: LoadModel = field(default_factory=lambda: LoadModel(10e6, 0.2e-12))

    def __post_init__(self):
        if not self.bandwidth_hz > 0:
            raise InvalidInputError("bandwidth_hz must be > 0")


def schmitt_thresholds(cfg: SchmittConfig) -> tuple[float, float]:
    """(falling, rising) trip voltages of the non-inverting trigger.

    Superposition on the r1/r2 divider: the comparator flips when
    v_in (r2) and v_out (r1) combine to v_ref, so each threshold is
    v_ref (r1 + r2)/r2 - v_out r1/r2 with v_out at the rail the output
    currently sits on. Hysteresis width is (v_out_high - v_out_low) r1/r2.
    """
    scale = (cfg.r1 + cfg.r2) / cfg.r2
    ratio = cfg.r1 / cfg.r2
    v_falling = cfg.v_ref * scale - cfg.v_out_high * ratio
    v_rising = cfg.v_ref * scale - cfg.v_out_low * ratio
    return v_falling, v_rising


def schmitt_step(cfg: SchmittConfig, state: SchmittState,
                 v_in: float) -> tuple[SchmittState, float]:
    """Advance the trigger by one sample; returns (new state, output voltage)."""
    v_falling, v_rising = schmitt_thresholds(cfg)
    if state is SchmittState.LOW and v_in >= v_rising:
        state = SchmittState.HIGH
    elif state is SchmittState.HIGH and v_in <= v_falling:
        state = SchmittState.LOW
    v_out = cfg.v_out_high if state is SchmittState.HIGH else cfg.v_out_low
    return state, v_out


def schmitt_apply(cfg: SchmittConfig, wave: Waveform,
                  initial: SchmittState = SchmittState.LOW) -> tuple[Waveform, SchmittState]:
    """Run the trigger across a waveform (vectorized schmitt_step).

    The state can only change at samples beyond a trip level, and between
    trips it holds, so the output is a forward fill of the trip events.
    """
    v_falling, v_rising = schmitt_thresholds(cfg)
    x = wave.samples
    trip = np.zeros(x.size, dtype=np.int8)
    trip[x >= v_rising] = 1
    trip[x <= v_falling] = -1
    idx = np.where(trip != 0, np.arange(x.size), -1)
    last = np.maximum.accumulate(idx)
    init_high = initial is SchmittState.HIGH
    high = np.where(last < 0, init_high, trip[np.maximum(last, 0)] > 0)
    out = np.where(high, cfg.v_out_high, cfg.v_out_low)
    final = SchmittState.HIGH if high[-1] else SchmittState.LOW
    return Waveform(wave.sample_rate, out), final


def buffer_apply(cfg: BufferConfig, wave: Waveform,
                 max_signal_freq: float | None = None) -> Waveform:
    """Unity buffer: single-pole low-pass at the configured bandwidth.

    Same discretization and settled start as the channel filter; rejects
    sample rates below 20x a declared signal band.
    """
    if max_signal_freq is not None:
        if not max_signal_freq > 0:
            raise InvalidInputError("max_signal_freq must be > 0")
        if wave.sample_rate < 20.0 * max_signal_freq:
            raise AliasingError(
                f"sample rate {wave.sample_rate:g} Hz below 20x the "
                f"declared {max_signal_freq:g} Hz band")
    tau = 1.0 / (2 * np.pi * cfg.bandwidth_hz)
    if tau * wave.sample_rate < 1e-6:
        return Waveform(wave.sample_rate, wave.samples.copy())
    b, a = scipy.signal.bilinear([1.0], [tau, 1.0], wave.sample_rate)
    zi = scipy.signal.lfilter_zi(b, a) * wave.samples[0]
    y, _ = scipy.signal.lfilter(b, a, wave.samples, zi=zi)
    return Waveform(wave.sample_rate, y)


def receiver_load(conditioned: bool,
                  calibration: Calibration | None = None) -> LoadModel:
    """What the channel output drives in each receiver configuration.

    Conditioned is the buffer input (the buffer presents its own input
    load to the channel, not whatever sits downstream). Unconditioned is
    the calibrated digital pin model.
    """
    cal = calibration or DEFAULT_CALIBRATION
    if conditioned:
        return BufferConfig(bandwidth_hz=cal.buffer_bandwidth_hz).input_load
    return LoadModel(cal.unconditioned_r_ohm, cal.unconditioned_c_f)
