"""Calibration constants and their on-disk key-value format.

The free parameters of the receiver model (unconditioned pin load, channel
parasitic shunt, buffer bandwidth) and the cell OCV slope live here rather
than scattered through the modules, so a bench recalibration is a one-file
edit. The file format is plain text, one `key = value` per line, `#` comments
allowed. Missing file means compiled-in defaults.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidInputError

# key -> Calibration attribute
_KEYS = {
    "load.unconditioned.r_ohm": "unconditioned_r_ohm",
    "load.unconditioned.c_f": "unconditioned_c_f",
    "channel.c_shunt_f": "c_shunt_f",
    "buffer.bandwidth_hz": "buffer_bandwidth_hz",
    "battery.ocv_slope_v_per_soc": "ocv_slope_v_per_soc",
}


@dataclass(frozen=True)
class Calibration:
    """Bench-calibrated constants shared by the receiver and battery models.

    The defaults reproduce the measured link behavior: the unconditioned pin
    load sets the 80 cm loss boundary and the ~1 MHz rolloff onset, and the
    shunt/buffer values keep the buffered path flat past 10 MHz.
    """

    unconditioned_r_ohm: float = 10_000.0
    unconditioned_c_f: float = 30e-12
    c_shunt_f: float = 0.0
    buffer_bandwidth_hz: float = 1e9
    ocv_slope_v_per_soc: float = 0.25
    version: str = "builtin-1"

    def __post_init__(self):
        if not self.unconditioned_r_ohm > 0:
            raise InvalidInputError("unconditioned_r_ohm must be > 0")
        if self.unconditioned_c_f < 0 or self.c_shunt_f < 0:
            raise InvalidInputError("capacitances must be >= 0")
        if not self.buffer_bandwidth_hz > 0:
            raise InvalidInputError("buffer_bandwidth_hz must be > 0")
        if not self.ocv_slope_v_per_soc > 0:
            raise InvalidInputError("ocv_slope_v_per_soc must be > 0")


DEFAULT_CALIBRATION = Calibration()


def parse_calibration(text: str) -> Calibration:
    """Parse the key-value format; unknown keys are rejected."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInputError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key == "version":
            values["version"] = val
        elif key in _KEYS:
            try:
                values[_KEYS[key]] = float(val)
            except ValueError as exc:
                raise InvalidInputError(f"line {lineno}: bad number {val!r}") from exc
        else:
            raise InvalidInputError(f"line {lineno}: unknown key {key!r}")
    # a parsed file that names no version must still be distinguishable
    # from the built-in table in report manifests
    values.setdefault("version", "unversioned")
    return Calibration(**values)


def load_calibration(path: str | Path) -> Calibration:
    return parse_calibration(Path(path).read_text())


def dump_calibration(cal: Calibration) -> str:
    """Render a Calibration back to the file format (round-trips)."""
    lines = [f"version = {cal.version}"]
    for key, attr in _KEYS.items():
        lines.append(f"{key} = {getattr(cal, attr):.12g}")
    return "\n".join(lines) + "\n"
