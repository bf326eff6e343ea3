"""Electrical model of an electrolyte-filled elastomer channel.

The channel is a lumped one-port: a bulk ionic resistance proportional to
tube length, in series with the double-layer capacitance of the two
electrode interfaces. Looking into the receiving end there is additionally
a parasitic shunt capacitance. Two views of that circuit matter:

* `impedance` is what an impedance analyzer sees across the channel: the
  series reactance of the interface capacitors dominates at low frequency
  and the curve flattens onto the bulk resistance above roughly 1 kHz.
* `transfer_gain` / `propagate` describe signal transmission in the flat
  band, where the channel acts as its bulk resistance driving the receiver
  load: a resistive divider with a single shunt-capacitance pole. The
  interface capacitors are already negligible series elements there.

Resistance scales linearly with length, so a two-point calibration pins the
model; `fit_channel` recovers the per-length and contact terms from bench
measurements and `calibrated_channel` builds specs anchored to the measured
2 kOhm at 0.2 m and 20 kOhm at 1.4 m.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.signal

from .afe import LoadModel
from .calibration import DEFAULT_CALIBRATION, Calibration
from .errors import AliasingError, InsufficientDataError, InvalidInputError
from .waveform import Waveform

# |Z| at the knee frequency sits 5% above the plateau; fixes c_interface.
KNEE_FREQ_HZ = 1e3
KNEE_RATIO = 1.05

# Bench anchor points: (length m, plateau resistance Ohm).
CALIBRATION_ANCHORS = ((0.2, 2_000.0), (1.4, 20_000.0))

# Minimum oversampling of the declared signal band for time-domain filtering.
MIN_OVERSAMPLE = 20.0


@dataclass(frozen=True)
class Electrolyte:
    """Working fluid description (carried for provenance, not computed on)."""

    salt: str = "ZnI2"
    molarity: float = 3.0
    solvent: str = "DI water + 10 wt% ethanol"

    def __post_init__(self):
        if not self.molarity > 0:
            raise InvalidInputError(f"molarity must be > 0, got {self.molarity}")


@dataclass(frozen=True)
class ChannelSpec:
    """Lumped electrical description of one channel.

    Parameters
    ----------
    length : m, > 0
    r_per_length : Ohm/m, > 0, bulk ionic resistance per unit length
    c_interface : F, > 0, double-layer capacitance of each electrode
    r_contact : Ohm, >= 0, lumped electrode/contact resistance
    c_shunt : F, >= 0, parasitic shunt capacitance at the receiving end
    inner_diameter : m, > 0
    """

    length: float
    r_per_length: float
    c_interface: float
    r_contact: float = 0.0
    c_shunt: float = 0.0
    inner_diameter: float = 5e-3
    electrolyte: Electrolyte = Electrolyte()

    def __post_init__(self):
        if not self.length > 0:
            raise InvalidInputError(f"length must be > 0, got {self.length}")
        if not self.r_per_length > 0:
            raise InvalidInputError("r_per_length must be > 0")
        if not self.c_interface > 0:
            raise InvalidInputError("c_interface must be > 0")
        if self.r_contact < 0:
            raise InvalidInputError("r_contact must be >= 0")
        if self.c_shunt < 0:
            raise InvalidInputError("c_shunt must be >= 0")
        if not self.inner_diameter > 0:
            raise InvalidInputError("inner_diameter must be > 0")
        if not self.r_bulk > 0:
            raise InvalidInputError("total bulk resistance must be > 0")

    @property
    def r_bulk(self) -> float:
        """Total series resistance: contact + per-length * length."""
        return self.r_contact + self.r_per_length * self.length


def fit_channel(measurements: Sequence[tuple[float, float]],
                constrain_contact_nonneg: bool = True) -> tuple[float, float]:
    """Least-squares affine fit of plateau resistance against length.

    Parameters
    ----------
    measurements : sequence of (length_m, resistance_ohm) pairs
    constrain_contact_nonneg : refit through the origin when the affine
        intercept comes out negative (a negative contact resistance is not
        physical; sparse bench data can produce one).

    Returns
    -------
    (r_per_length, r_contact)
    """
    if len(measurements) < 2:
        raise InsufficientDataError("need at least 2 (length, resistance) points")
    ls = np.asarray([m[0] for m in measurements], dtype=float)
    rs = np.asarray([m[1] for m in measurements], dtype=float)
    if np.any(ls <= 0):
        raise InvalidInputError("lengths must be > 0")
    if np.any(rs <= 0):
        raise InvalidInputError("resistances must be > 0")
    if np.unique(ls).size < 2:
        raise InsufficientDataError("need at least 2 distinct lengths")

    lm, rm = ls.mean(), rs.mean()
    slope = float(np.sum((ls - lm) * (rs - rm)) / np.sum((ls - lm) ** 2))
    intercept = float(rm - slope * lm)
    if constrain_contact_nonneg and intercept < 0:
        # through-origin least squares
        slope = float(np.sum(ls * rs) / np.sum(ls * ls))
        intercept = 0.0
    return slope, intercept


def impedance(spec: ChannelSpec, freq) -> complex | np.ndarray:
    """Complex channel impedance at `freq` (Hz, scalar or array, > 0).

    Z(f) = r_bulk + 2 / (j 2 pi f c_interface): the two interface
    capacitors in series with the bulk resistance. |Z| decreases
    monotonically with frequency and flattens onto r_bulk.
    """
    f = np.asarray(freq, dtype=float)
    if np.any(f <= 0):
        raise InvalidInputError("freq must be > 0")
    z = spec.r_bulk - 2j / (2 * np.pi * f * spec.c_interface)
    return complex(z) if np.isscalar(freq) else z


def sweep_grid() -> np.ndarray:
    """Measurement frequency grid in Hz.

    Every 20 Hz from 20 Hz to 2 kHz, every 500 Hz to 100 kHz, every 5 kHz
    to 1 MHz; shared boundary points appear once (476 points total).
    """
    a = np.arange(20, 2_001, 20)
    b = np.arange(2_500, 100_001, 500)
    c = np.arange(105_000, 1_000_001, 5_000)
    return np.concatenate([a, b, c]).astype(float)


def _load_admittance(spec: ChannelSpec, load: LoadModel, f: np.ndarray) -> np.ndarray:
    c_total = spec.c_shunt + load.capacitance
    g = 0.0 if np.isinf(load.resistance) else 1.0 / load.resistance
    return g + 1j * 2 * np.pi * f * c_total


def transfer_gain(spec: ChannelSpec, load: LoadModel, freq) -> complex | np.ndarray:
    """In-band voltage divider gain from channel input to the receiver node.

    The bulk resistance drives the load resistance in parallel with the
    total shunt capacitance (channel parasitic + load), giving
    gain(f) = 1 / (1 + r_bulk * (1/R_load + j 2 pi f C_total)). |gain| <= 1,
    with a single pole at 1 / (2 pi (r_bulk || R_load) C_total).
    """
    f = np.asarray(freq, dtype=float)
    if np.any(f < 0):
        raise InvalidInputError("freq must be >= 0")
    g = 1.0 / (1.0 + spec.r_bulk * _load_admittance(spec, load, f))
    return complex(g) if np.isscalar(freq) else g


def propagate(spec: ChannelSpec, load: LoadModel, wave: Waveform,
              max_signal_freq: float | None = None) -> Waveform:
    """Push a waveform through the channel divider in the time domain.

    The continuous single-pole prototype behind `transfer_gain` is
    discretized with the bilinear transform at the waveform's sample rate
    and started in steady state at the first sample (the line is assumed
    to have sat at that level). Steady-state sine gain matches
    |transfer_gain| within 2% when the sample rate is at least 20x the
    signal frequency.

    Parameters
    ----------
    max_signal_freq : optional declared band limit of `wave`; when given,
        sample rates below 20x this value are rejected rather than
        silently aliasing.
    """
    if max_signal_freq is not None:
        if not max_signal_freq > 0:
            raise InvalidInputError("max_signal_freq must be > 0")
        if wave.sample_rate < MIN_OVERSAMPLE * max_signal_freq:
            raise AliasingError(
                f"sample rate {wave.sample_rate:g} Hz below "
                f"{MIN_OVERSAMPLE:g}x the declared {max_signal_freq:g} Hz band")

    r = spec.r_bulk
    r_load = load.resistance
    k = 1.0 / (1.0 + (0.0 if np.isinf(r_load) else r / r_load))
    tau = r * (spec.c_shunt + load.capacitance) * k
    return Waveform(wave.sample_rate,
                    _first_order_filter(wave.samples, wave.sample_rate, k, tau))


def _first_order_filter(x: np.ndarray, fs: float, k: float, tau: float) -> np.ndarray:
    """y for H(s) = k / (1 + s tau), settled at x[0] before the first sample."""
    if tau * fs < 1e-6:
        # pole far above Nyquist: the response is the flat gain
        return k * x
    b, a = scipy.signal.bilinear([k], [tau, 1.0], fs)
    zi = scipy.signal.lfilter_zi(b, a) * x[0]
    y, _ = scipy.signal.lfilter(b, a, x, zi=zi)
    return y


def calibrated_channel(length: float,
                       calibration: Calibration | None = None) -> ChannelSpec:
    """ChannelSpec anchored to the bench measurements for a given length.

    The plateau resistance interpolates the two anchor points exactly
    (15 kOhm/m slope, -1 kOhm intercept), folded into a per-length rate
    with zero contact term so ChannelSpec validation holds. Only lengths
    with a positive interpolated resistance are representable (> 1/15 m).
    c_interface is chosen so |Z| at 1 kHz sits 5% above the plateau.
    """
    cal = calibration or DEFAULT_CALIBRATION
    (l0, r0), (l1, r1) = CALIBRATION_ANCHORS
    slope = (r1 - r0) / (l1 - l0)
    r_plateau = r0 + slope * (length - l0)
    if not length > 0:
        raise InvalidInputError(f"length must be > 0, got {length}")
    if r_plateau <= 0:
        raise InvalidInputError(
            f"length {length:g} m is below the calibrated range "
            f"(interpolated resistance {r_plateau:g} Ohm)")
    c_int = 2.0 / (2 * np.pi * KNEE_FREQ_HZ * r_plateau * np.sqrt(KNEE_RATIO**2 - 1))
    return ChannelSpec(length=length,
                       r_per_length=r_plateau / length,
                       c_interface=c_int,
                       r_contact=0.0,
                       c_shunt=cal.c_shunt_f)


def identity_channel() -> ChannelSpec:
    """A vanishingly short channel, indistinguishable from a plain wire."""
    return ChannelSpec(length=1e-3, r_per_length=1e-6, c_interface=1.0)


def write_sweep_csv(path: str | Path, spec: ChannelSpec,
                    freqs: np.ndarray | None = None) -> np.ndarray:
    """Write one impedance sweep; returns the complex values written."""
    f = sweep_grid() if freqs is None else np.asarray(freqs, dtype=float)
    z = impedance(spec, f)
    lines = ["freq_hz,z_real_ohm,z_imag_ohm,z_mag_ohm"]
    for fi, zi in zip(f, z):
        lines.append(f"{fi:.12g},{zi.real:.12g},{zi.imag:.12g},{abs(zi):.12g}")
    Path(path).write_text("\n".join(lines) + "\n")
    return z
