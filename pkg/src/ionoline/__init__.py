"""Simulation of data links and power delivery over ionic fluid channels.

Submodules: channel (impedance and propagation), afe (receiver front end),
link (UART framing and end-to-end runs), battery (flow cell module),
duplex (two-node failover protocol), calibration (shared constants),
cli (report generation).
"""

from .afe import (BufferConfig, LoadModel, SchmittConfig, SchmittState,
                  buffer_apply, receiver_load, schmitt_apply, schmitt_step,
                  schmitt_thresholds)
from .battery import (CellConfig, CycleTrace, ModuleState, PowerBudget, cycle,
                      ocv, power_budget, rated_current, terminal_voltage,
                      write_cycle_csv)
from .calibration import (DEFAULT_CALIBRATION, Calibration, dump_calibration,
                          load_calibration, parse_calibration)
from .channel import (ChannelSpec, Electrolyte, calibrated_channel, fit_channel,
                      identity_channel, impedance, propagate, sweep_grid,
                      transfer_gain, write_sweep_csv)
from .duplex import (DuplexConfig, Mode, NodeState, TraceEvent, check_trace,
                     node_step, parse_scenario, simulate, write_trace_csv)
from .errors import AliasingError, InsufficientDataError, InvalidInputError
from .link import (LinkConfig, LinkStats, UartConfig, knob_demo, link_matrix,
                   run_link, uart_decode, uart_encode, write_link_matrix_csv)
from .waveform import Waveform, constant, sine, tone_amplitude

__version__ = "0.1.0"

__all__ = [
    "AliasingError", "BufferConfig", "Calibration", "CellConfig", "ChannelSpec",
    "CycleTrace", "DEFAULT_CALIBRATION", "DuplexConfig", "Electrolyte",
    "InsufficientDataError", "InvalidInputError", "LinkConfig", "LinkStats",
    "LoadModel", "Mode", "ModuleState", "NodeState", "PowerBudget",
    "SchmittConfig", "SchmittState", "TraceEvent", "UartConfig", "Waveform",
    "buffer_apply", "calibrated_channel", "check_trace", "constant", "cycle",
    "dump_calibration", "fit_channel", "identity_channel", "impedance",
    "knob_demo", "link_matrix", "load_calibration", "node_step", "ocv",
    "parse_calibration", "parse_scenario", "power_budget", "propagate",
    "rated_current", "receiver_load", "run_link", "schmitt_apply",
    "schmitt_step", "schmitt_thresholds", "simulate", "sine", "sweep_grid",
    "terminal_voltage", "tone_amplitude", "transfer_gain", "uart_decode",
    "uart_encode", "write_cycle_csv", "write_link_matrix_csv",
    "write_sweep_csv", "write_trace_csv",
]
