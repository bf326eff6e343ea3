"""Uniformly sampled voltage waveforms.

A Waveform is the unit of exchange between the encoder, the channel filter,
the analog front end and the decoder: a float64 sample array plus its sample
rate. Helpers cover the two shapes the simulations need (constant levels and
sine bursts) and a steady-state amplitude probe used to compare time-domain
runs against analytic gains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True, eq=False)
class Waveform:
    """Sampled signal with a fixed rate.

    samples are coerced to a float64 numpy array; the array must be
    non-empty and finite.
    """

    sample_rate: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise InvalidInputError(f"sample_rate must be > 0, got {self.sample_rate}")
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("samples must be a non-empty 1-D array")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("samples must be finite")
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        """Total span in seconds (one sample period per sample)."""
        return self.samples.size / self.sample_rate

    @property
    def t(self) -> np.ndarray:
        """Sample times in seconds, starting at 0."""
        return np.arange(self.samples.size) / self.sample_rate


def constant(level: float, duration: float, sample_rate: float) -> Waveform:
    """A flat level held for the given duration (at least one sample)."""
    n = max(1, round(duration * sample_rate))
    return Waveform(sample_rate, np.full(n, float(level)))


def sine(amplitude: float, freq: float, duration: float, sample_rate: float,
         offset: float = 0.0) -> Waveform:
    """A sine burst: offset + amplitude * sin(2 pi f t)."""
    if not freq > 0:
        raise InvalidInputError(f"freq must be > 0, got {freq}")
    n = max(1, round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    return Waveform(sample_rate, offset + amplitude * np.sin(2 * np.pi * freq * t))


def tone_amplitude(wave: Waveform, freq: float, skip: float = 0.0) -> float:
    """Amplitude of the component at `freq`, measured after `skip` seconds.

    Projects the tail of the waveform onto exp(-j 2 pi f t) over a whole
    number of periods, so leakage from the transient left before `skip`
    does not bias the estimate. Needs at least one full period of data.
    """
    i0 = int(round(skip * wave.sample_rate))
    period = wave.sample_rate / freq
    n_periods = int((wave.samples.size - i0) / period)
    if n_periods < 1:
        raise InvalidInputError("waveform too short to hold one period after skip")
    n = int(round(n_periods * period))
    seg = wave.samples[i0:i0 + n]
    t = (np.arange(n) + i0) / wave.sample_rate
    z = np.mean(seg * np.exp(-2j * np.pi * freq * t))
    return 2.0 * abs(z)
