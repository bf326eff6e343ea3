"""Zinc-iodide flow cell module: OCV, IR drop, cycling, power budget.

The module is two cells in series. Open-circuit voltage is linear in state
of charge, anchored at 1.2 V per cell at 20% SOC with a 0.25 V/SOC slope.
The series resistance is pinned by the measured operating point, 2.2 V at
124 mA for the module, and cycling is plain coulomb counting between SOC
bounds. Sign convention: positive current discharges.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .calibration import DEFAULT_CALIBRATION
from .errors import InvalidInputError

OCV_ANCHOR_SOC = 0.20
OCV_ANCHOR_V = 1.20

# module operating point that fixes the series resistance
ANCHOR_CURRENT_A = 0.124
ANCHOR_MODULE_V = 2.2

SOC_MIN = 0.05
SOC_MAX = 0.95

CELLS_PER_MODULE = 2

# transient overloads beyond this multiple of the rated current are rejected
OVERCURRENT_FACTOR = 1.5

CYCLE_CSV_HEADER = "t_s,soc,voltage_v,current_a,phase"


def _default_capacity_c() -> float:
    # one half-cycle (0.90 of capacity) lasts an hour at the anchor current
    return ANCHOR_CURRENT_A * 3600.0 / (SOC_MAX - SOC_MIN)


def _default_cell_resistance() -> float:
    ocv_module = CELLS_PER_MODULE * OCV_ANCHOR_V
    return (ocv_module - ANCHOR_MODULE_V) / ANCHOR_CURRENT_A / CELLS_PER_MODULE


@dataclass(frozen=True)
class CellConfig:
    """Single-cell electrical and geometric parameters.

    electrode_area in cm^2, current limits in mA (the density-derived
    limit and the separately stated device limit; the effective rating is
    their minimum). capacity_c is per cell in coulombs.
    """

    electrode_area_cm2: float = 20.0
    current_density_limit_ma_cm2: float = 50.0
    stated_current_limit_ma: float = 100.0
    capacity_c: float = _default_capacity_c()
    internal_resistance_ohm: float = _default_cell_resistance()
    ocv_slope_v_per_soc: float = DEFAULT_CALIBRATION.ocv_slope_v_per_soc

    def __post_init__(self):
        for name in ("electrode_area_cm2", "current_density_limit_ma_cm2",
                     "stated_current_limit_ma", "capacity_c",
                     "internal_resistance_ohm", "ocv_slope_v_per_soc"):
            if not getattr(self, name) > 0:
                raise InvalidInputError(f"{name} must be > 0")


@dataclass(frozen=True)
class ModuleState:
    """Instantaneous module condition."""

    soc: float
    voltage_v: float
    current_a: float

    @property
    def charged(self) -> bool:
        # catholyte color flag: dark above half charge
        return self.soc > 0.5


@dataclass(frozen=True)
class PowerBudget:
    source_power_w: float
    boost_efficiency: float
    load_power_w: float

    @property
    def margin_w(self) -> float:
        return self.source_power_w * self.boost_efficiency - self.load_power_w

    @property
    def sufficient(self) -> bool:
        return self.margin_w >= 0


@dataclass(frozen=True)
class CycleTrace:
    """Columns of a cycling run; phase is 'charge' or 'discharge' per sample."""

    t_s: np.ndarray
    soc: np.ndarray
    voltage_v: np.ndarray
    current_a: np.ndarray
    phase: list[str]
    half_cycles: int


def rated_current(cfg: CellConfig) -> tuple[float, float]:
    """(density-derived limit, stated limit) in mA; min() is the rating."""
    return (cfg.current_density_limit_ma_cm2 * cfg.electrode_area_cm2,
            cfg.stated_current_limit_ma)


def _effective_limit_a(cfg: CellConfig) -> float:
    return min(rated_current(cfg)) / 1000.0


def ocv(cfg: CellConfig, soc: float) -> float:
    """Per-cell open-circuit voltage, linear in SOC through the anchor."""
    if not 0.0 <= soc <= 1.0:
        raise InvalidInputError(f"soc must be in [0, 1], got {soc}")
    return OCV_ANCHOR_V + cfg.ocv_slope_v_per_soc * (soc - OCV_ANCHOR_SOC)


def terminal_voltage(cfg: CellConfig, soc: float, current_a: float) -> float:
    """Module terminal voltage at the given SOC and current (+ discharge)."""
    limit = OVERCURRENT_FACTOR * _effective_limit_a(cfg)
    if abs(current_a) > limit:
        raise InvalidInputError(
            f"|current| {abs(current_a):g} A exceeds {limit:g} A "
            f"({OVERCURRENT_FACTOR:g} x rated)")
    r_module = CELLS_PER_MODULE * cfg.internal_resistance_ohm
    return CELLS_PER_MODULE * ocv(cfg, soc) - current_a * r_module


def cycle(cfg: CellConfig, n_cycles: int = 5,
          current_a: float = ANCHOR_CURRENT_A, dt_s: float = 1.0,
          soc_start: float = SOC_MIN) -> CycleTrace:
    """Constant-current cycling between the SOC bounds by coulomb counting.

    Each cycle is one charge half-cycle to SOC 0.95 followed by one
    discharge half-cycle to SOC 0.05. Steps are dt_s long with an exact
    partial step landing on each bound, so the trace is piecewise linear
    and energy integrals over it are exact.
    """
    if n_cycles < 1:
        raise InvalidInputError("n_cycles must be >= 1")
    if not current_a > 0:
        raise InvalidInputError("current_a must be > 0")
    if not dt_s > 0:
        raise InvalidInputError("dt_s must be > 0")
    if not SOC_MIN <= soc_start <= SOC_MAX:
        raise InvalidInputError(f"soc_start must be in [{SOC_MIN}, {SOC_MAX}]")

    t_list, soc_list, v_list, i_list, phase_list = [], [], [], [], []
    t, soc = 0.0, soc_start
    soc_rate = current_a / cfg.capacity_c  # SOC per second at this current

    def record(phase: str, signed_current: float):
        t_list.append(t)
        soc_list.append(soc)
        v_list.append(terminal_voltage(cfg, soc, signed_current))
        i_list.append(signed_current)
        phase_list.append(phase)

    halves = 0
    for _ in range(n_cycles):
        for phase, target in (("charge", SOC_MAX), ("discharge", SOC_MIN)):
            signed = -current_a if phase == "charge" else current_a
            direction = 1.0 if phase == "charge" else -1.0
            if soc != target:
                halves += 1
            record(phase, signed)
            while soc != target:
                step = min(dt_s, abs(target - soc) / soc_rate)
                t += step
                soc = soc + direction * soc_rate * step
                if abs(target - soc) < 1e-12:
                    soc = target
                record(phase, signed)
    return CycleTrace(t_s=np.asarray(t_list), soc=np.asarray(soc_list),
                      voltage_v=np.asarray(v_list), current_a=np.asarray(i_list),
                      phase=phase_list, half_cycles=halves)


def power_budget(source_power_w: float, boost_efficiency: float = 0.80,
                 load_power_w: float = 0.050) -> PowerBudget:
    """Post-boost headroom of a source feeding a regulated load."""
    if not source_power_w >= 0:
        raise InvalidInputError("source_power_w must be >= 0")
    if not 0 < boost_efficiency <= 1:
        raise InvalidInputError("boost_efficiency must be in (0, 1]")
    if load_power_w < 0:
        raise InvalidInputError("load_power_w must be >= 0")
    return PowerBudget(source_power_w, boost_efficiency, load_power_w)


def write_cycle_csv(path: str | Path, trace: CycleTrace) -> None:
    lines = [CYCLE_CSV_HEADER]
    for t, soc, v, i, ph in zip(trace.t_s, trace.soc, trace.voltage_v,
                                trace.current_a, trace.phase):
        lines.append(f"{t:.12g},{soc:.12g},{v:.12g},{i:.12g},{ph}")
    Path(path).write_text("\n".join(lines) + "\n")
