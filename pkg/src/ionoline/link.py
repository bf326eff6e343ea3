"""Serial links through a channel: UART codec, end-to-end runs, sweeps.

Framing is 8N1 at 0/5 V logic: the line idles high, a byte is one low
start bit, eight data bits LSB first, one high stop bit. The decoder hunts
for a falling edge, samples every bit at its midpoint, and requires the
stop bit to read high; anything else is a framing error.

Bit boundaries are kept on an exact fractional-sample grid (cumulative
bit index times samples-per-bit, rounded per edge), so long payloads do
not accumulate drift even when samples-per-bit is not an integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import afe, channel
from .calibration import Calibration
from .errors import InvalidInputError
from .waveform import Waveform

SUPPORTED_BAUDS = (300, 1200, 2400, 4800, 9600, 19200)
DEFAULT_LENGTHS = (0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4)

# Idle bit-times inserted by run_link before and between frames.
LINK_IDLE_BITS = 2.0

LINK_MATRIX_CSV_HEADER = "length_m,baud,conditioned,sent,received,lost,bit_errors,framing_errors"


@dataclass(frozen=True)
class UartConfig:
    """8N1 serial settings at 0/5 V logic."""

    baud: int = 9600
    data_bits: int = 8
    stop_bits: int = 1
    parity: str = "none"
    v_low: float = 0.0
    v_high: float = 5.0

    def __post_init__(self):
        if self.baud not in SUPPORTED_BAUDS:
            raise InvalidInputError(
                f"baud must be one of {SUPPORTED_BAUDS}, got {self.baud}")
        if (self.data_bits, self.stop_bits, self.parity) != (8, 1, "none"):
            raise InvalidInputError("framing is fixed to 8N1")
        if not self.v_low < self.v_high:
            raise InvalidInputError("need v_low < v_high")


@dataclass(frozen=True)
class LinkStats:
    """Outcome counters for one link run.

    packets_lost is always packets_sent - packets_received; bit_errors
    counts bit flips in bytes that were decoded but did not match.
    """

    packets_sent: int
    packets_received: int
    packets_lost: int
    bit_errors: int
    framing_errors: int

    def __post_init__(self):
        if min(self.packets_sent, self.packets_received, self.bit_errors,
               self.framing_errors) < 0:
            raise InvalidInputError("counters must be >= 0")
        if self.packets_lost != self.packets_sent - self.packets_received:
            raise InvalidInputError("packets_lost must equal sent - received")


@dataclass(frozen=True)
class LinkConfig:
    """One end-to-end link: channel, receiver style, serial settings.

    sample_rate defaults to max(64 x baud, 1 MHz) and must stay at or
    above 16 x baud for the decoder's midpoint sampling to make sense.
    """

    channel: channel.ChannelSpec
    conditioned: bool = True
    uart: UartConfig = UartConfig()
    sample_rate: float | None = None

    def __post_init__(self):
        if self.sample_rate is None:
            object.__setattr__(self, "sample_rate",
                               float(max(64 * self.uart.baud, 1_000_000)))
        if self.sample_rate < 16 * self.uart.baud:
            raise InvalidInputError(
                f"sample_rate {self.sample_rate:g} below 16 x baud")


def _frame_bits(byte: int) -> list[int]:
    # start, 8 data LSB first, stop
    return [0] + [(byte >> k) & 1 for k in range(8)] + [1]


def uart_encode(payload: bytes | Sequence[int], cfg: UartConfig,
                sample_rate: float, lead_idle_bits: float = 0.0,
                inter_byte_idle_bits: float = 0.0,
                tail_idle_bits: float = 0.0) -> Waveform:
    """Render a payload as a sampled line voltage.

    With the idle arguments at their defaults the waveform is exactly the
    frames back to back: n bytes span n * 10 / baud seconds to within one
    sample. Idle stretches (high level, fractional bit-times allowed) can
    be inserted before the first frame, between frames and after the last.
    """
    if sample_rate < 16 * cfg.baud:
        raise InvalidInputError(f"sample_rate {sample_rate:g} below 16 x baud")
    if min(lead_idle_bits, inter_byte_idle_bits, tail_idle_bits) < 0:
        raise InvalidInputError("idle bit counts must be >= 0")
    try:
        data = bytes(payload)
    except (ValueError, TypeError) as exc:
        raise InvalidInputError(f"payload must be bytes in 0..255: {exc}") from exc

    levels: list[int] = []
    widths: list[float] = []

    def emit(level: int, bits: float):
        if bits > 0:
            levels.append(level)
            widths.append(bits)

    emit(1, lead_idle_bits)
    for i, byte in enumerate(data):
        if i:
            emit(1, inter_byte_idle_bits)
        for bit in _frame_bits(byte):
            emit(bit, 1.0)
    emit(1, tail_idle_bits)
    if not levels:
        emit(1, 1.0)  # empty payload: one idle bit-time

    spb = sample_rate / cfg.baud
    edges = np.round(np.concatenate([[0.0], np.cumsum(widths)]) * spb).astype(np.int64)
    samples = np.empty(edges[-1], dtype=np.float64)
    for lv, lo, hi in zip(levels, edges[:-1], edges[1:]):
        samples[lo:hi] = cfg.v_high if lv else cfg.v_low
    return Waveform(sample_rate, samples)


def uart_decode(wave: Waveform, cfg: UartConfig,
                threshold: float) -> tuple[bytes, int]:
    """Recover bytes from a line voltage; returns (bytes, framing_errors).

    The sample before the waveform is taken as idle high, so a line that
    starts low counts as an immediate start edge. Frames that would run
    past the end of the waveform are ignored rather than flagged.
    """
    if not cfg.v_low < threshold < cfg.v_high:
        raise InvalidInputError("threshold must lie strictly between the logic levels")
    high = wave.samples >= threshold
    spb = wave.sample_rate / cfg.baud

    # candidate start edges: high -> low transitions (virtual high at index -1)
    edges = np.flatnonzero(high[:-1] & ~high[1:]) + 1
    if not high[0]:
        edges = np.concatenate([[0], edges])

    out = bytearray()
    framing_errors = 0
    pos = 0
    n = high.size
    for e in edges:
        if e < pos:
            continue
        stop_mid = e + round(9.5 * spb)
        if stop_mid >= n:
            break
        bits = [high[e + round((k + 1.5) * spb)] for k in range(8)]
        if high[stop_mid]:
            out.append(sum(int(b) << k for k, b in enumerate(bits)))
        else:
            framing_errors += 1
        pos = stop_mid + 1
    return bytes(out), framing_errors


def _stats(sent: bytes, decoded: bytes, framing_errors: int) -> LinkStats:
    received = 0
    bit_errors = 0
    for s, d in zip(sent, decoded):
        if s == d:
            received += 1
        else:
            bit_errors += bin(s ^ d).count("1")
    return LinkStats(packets_sent=len(sent), packets_received=received,
                     packets_lost=len(sent) - received, bit_errors=bit_errors,
                     framing_errors=framing_errors)


def run_link(cfg: LinkConfig, payload: bytes | Sequence[int],
             calibration: Calibration | None = None) -> LinkStats:
    """Simulate one transmission end to end.

    Encode, propagate through the channel into the configured receiver
    load, then either decode the raw node voltage against the 2.5 V
    mid-rail (unconditioned) or run the buffer and Schmitt trigger first
    and decode the regenerated output against the mid-swing level.
    """
    payload = bytes(payload)
    wave = uart_encode(payload, cfg.uart, cfg.sample_rate,
                       lead_idle_bits=LINK_IDLE_BITS,
                       inter_byte_idle_bits=LINK_IDLE_BITS,
                       tail_idle_bits=LINK_IDLE_BITS)
    load = afe.receiver_load(cfg.conditioned, calibration)
    band = cfg.uart.baud / 2  # highest fundamental of the bit stream
    received = channel.propagate(cfg.channel, load, wave, max_signal_freq=band)

    if cfg.conditioned:
        cal = calibration or None
        buf = afe.BufferConfig() if cal is None else afe.BufferConfig(
            bandwidth_hz=cal.buffer_bandwidth_hz)
        buffered = afe.buffer_apply(buf, received, max_signal_freq=band)
        schmitt = afe.SchmittConfig()
        regenerated, _ = afe.schmitt_apply(schmitt, buffered)
        threshold = 0.5 * (schmitt.v_out_low + schmitt.v_out_high)
        decoded, framing = uart_decode(regenerated, cfg.uart, threshold)
    else:
        mid_rail = 0.5 * (cfg.uart.v_low + cfg.uart.v_high)
        decoded, framing = uart_decode(received, cfg.uart, mid_rail)
    return _stats(payload, decoded, framing)


def link_matrix(conditioned: bool,
                lengths: Sequence[float] = DEFAULT_LENGTHS,
                bauds: Sequence[int] = SUPPORTED_BAUDS,
                payload: bytes = bytes(range(8)),
                calibration: Calibration | None = None,
                ) -> list[tuple[float, int, bool, LinkStats]]:
    """Run the payload across every (length, baud) cell.

    Cells are independent; rows come back sorted by (length, baud).
    """
    rows = []
    for length in sorted(lengths):
        spec = channel.calibrated_channel(length, calibration)
        for baud in sorted(bauds):
            cfg = LinkConfig(channel=spec, conditioned=conditioned,
                             uart=UartConfig(baud=baud))
            rows.append((length, baud, conditioned,
                         run_link(cfg, payload, calibration)))
    return rows


def write_link_matrix_csv(path: str | Path,
                          rows: Sequence[tuple[float, int, bool, LinkStats]]) -> None:
    lines = [LINK_MATRIX_CSV_HEADER]
    for length, baud, conditioned, st in rows:
        lines.append(f"{length:.12g},{baud},{str(conditioned).lower()},"
                     f"{st.packets_sent},{st.packets_received},{st.packets_lost},"
                     f"{st.bit_errors},{st.framing_errors}")
    Path(path).write_text("\n".join(lines) + "\n")


LED_COUNT = 12
POT_STEPS = 1024


def knob_demo(pot_value: int, channel_length: float = 10.0,
              calibration: Calibration | None = None) -> int:
    """Map a 10-bit potentiometer reading to an LED index across the link.

    The sender quantizes the reading to one of 12 LEDs, transmits the
    index as a byte over a conditioned 9600 baud link, and the receiver
    lights what it decodes. The calibrated long channel delivers every
    byte intact; a loss would mean the link model broke, so it is asserted.
    """
    if not 0 <= pot_value < POT_STEPS:
        raise InvalidInputError(f"pot_value must be in [0, {POT_STEPS}), got {pot_value}")
    led = pot_value * LED_COUNT // POT_STEPS
    cfg = LinkConfig(channel=channel.calibrated_channel(channel_length, calibration),
                     conditioned=True, uart=UartConfig(baud=9600))
    wave = uart_encode([led], cfg.uart, cfg.sample_rate,
                       lead_idle_bits=LINK_IDLE_BITS, tail_idle_bits=LINK_IDLE_BITS)
    load = afe.receiver_load(True, calibration)
    band = cfg.uart.baud / 2
    received = channel.propagate(cfg.channel, load, wave, max_signal_freq=band)
    buffered = afe.buffer_apply(afe.BufferConfig(), received, max_signal_freq=band)
    schmitt = afe.SchmittConfig()
    regenerated, _ = afe.schmitt_apply(schmitt, buffered)
    decoded, _ = uart_decode(regenerated, cfg.uart,
                             0.5 * (schmitt.v_out_low + schmitt.v_out_high))
    assert decoded == bytes([led]), \
        f"conditioned {channel_length} m link corrupted LED index {led}"
    return decoded[0]
