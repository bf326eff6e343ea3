"""Command-line reports: sweeps, matrices and traces as CSV/SVG files.

Each subcommand regenerates one of the bench figures from the simulation
modules and drops its tables (and plots, where they exist) under
--out-dir, together with a small JSON manifest naming the inputs,
parameters and outputs. Everything is deterministic: rerunning a command
with the same arguments rewrites byte-identical files.

Exit codes: 0 success, 2 usage error, 1 internal assertion failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import afe, battery, channel, duplex, link, svgplot
from .calibration import DEFAULT_CALIBRATION, Calibration, load_calibration
from .errors import InvalidInputError

DEFAULT_CALIBRATION_FILE = "calibration.txt"


def _write_manifest(out_dir: Path, command: str, parameters: dict,
                    cal: Calibration, outputs: list[str]) -> None:
    manifest = {
        "command": command,
        "parameters": parameters,
        "calibration_version": cal.version,
        "outputs": sorted(outputs),
    }
    path = out_dir / f"{command}_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _gain_grid() -> np.ndarray:
    # 20 points per decade, 1 kHz to 100 MHz; lands exactly on 10 MHz
    return np.round(np.logspace(3, 8, 101), 6)


def cmd_impedance(args, cal: Calibration, out_dir: Path) -> list[str]:
    if not args.lengths:
        raise InvalidInputError("at least one length is required")
    outputs = []
    series = []
    grid = channel.sweep_grid()
    for length in args.lengths:
        spec = channel.calibrated_channel(length, cal)
        name = f"impedance_{length:g}m.csv"
        if args.format in ("csv", "both"):
            channel.write_sweep_csv(out_dir / name, spec, grid)
            outputs.append(name)
        series.append((f"{length:g} m", grid, np.abs(channel.impedance(spec, grid))))
    if args.format in ("svg", "both"):
        svgplot.write_plot(out_dir / "impedance.svg", series,
                           title="Channel impedance magnitude",
                           xlabel="frequency (Hz)", ylabel="|Z| (Ohm)",
                           log_x=True, log_y=True)
        outputs.append("impedance.svg")
    return outputs


def cmd_freqresponse(args, cal: Calibration, out_dir: Path) -> list[str]:
    spec = channel.calibrated_channel(args.length, cal)
    load = afe.receiver_load(args.conditioned, cal)
    grid = _gain_grid()
    gain = np.abs(channel.transfer_gain(spec, load, grid))
    kind = "conditioned" if args.conditioned else "unconditioned"
    outputs = []
    name = f"freqresponse_{kind}.csv"
    if args.format in ("csv", "both"):
        lines = ["freq_hz,gain_mag"]
        for f, g in zip(grid, gain):
            lines.append(f"{f:.12g},{g:.12g}")
        (out_dir / name).write_text("\n".join(lines) + "\n")
        outputs.append(name)
    if args.format in ("svg", "both"):
        svg = f"freqresponse_{kind}.svg"
        svgplot.write_plot(out_dir / svg, [(kind, grid, gain)],
                           title=f"Receiver gain, {args.length:g} m channel",
                           xlabel="frequency (Hz)", ylabel="|gain|", log_x=True)
        outputs.append(svg)
    return outputs


def cmd_linkmatrix(args, cal: Calibration, out_dir: Path) -> list[str]:
    rows = link.link_matrix(args.conditioned, calibration=cal)
    kind = "conditioned" if args.conditioned else "unconditioned"
    name = f"linkmatrix_{kind}.csv"
    link.write_link_matrix_csv(out_dir / name, rows)
    return [name]


def cmd_knob(args, cal: Calibration, out_dir: Path) -> list[str]:
    led = link.knob_demo(args.pot_value, calibration=cal)
    print(led)
    return []


def cmd_battery(args, cal: Calibration, out_dir: Path) -> list[str]:
    cfg = battery.CellConfig(ocv_slope_v_per_soc=cal.ocv_slope_v_per_soc)
    trace = battery.cycle(cfg, n_cycles=args.cycles)
    outputs = []
    if args.format in ("csv", "both"):
        battery.write_cycle_csv(out_dir / "battery_cycles.csv", trace)
        outputs.append("battery_cycles.csv")
    if args.format in ("svg", "both"):
        svgplot.write_plot(out_dir / "battery_cycles.svg",
                           [("module voltage", trace.t_s, trace.voltage_v)],
                           title=f"Constant-current cycling, {args.cycles} cycles",
                           xlabel="time (s)", ylabel="voltage (V)")
        outputs.append("battery_cycles.svg")
    return outputs


def cmd_duplex(args, cal: Calibration, out_dir: Path) -> list[str]:
    scenario = []
    if args.scenario is not None:
        path = Path(args.scenario)
        if not path.exists():
            raise InvalidInputError(f"scenario file not found: {path}")
        scenario = duplex.parse_scenario(path.read_text())
    cfg = duplex.DuplexConfig()
    trace = duplex.simulate(cfg, scenario, t_end=args.t_end, calibration=cal)
    duplex.write_trace_csv(out_dir / "duplex_trace.csv", trace)
    return ["duplex_trace.csv"]


def _add_shared(parser: argparse.ArgumentParser, top: bool) -> None:
    # the top-level parser owns the defaults; the per-subcommand copies use
    # SUPPRESS so they only override when actually given after the command
    def default(value):
        return value if top else argparse.SUPPRESS

    parser.add_argument("--out-dir", default=default("."),
                        help="output directory")
    parser.add_argument("--calibration", default=default(None),
                        help=f"calibration file (default: {DEFAULT_CALIBRATION_FILE} "
                             "if present, else built-in values)")
    parser.add_argument("--format", choices=("csv", "svg", "both"),
                        default=default("both"),
                        help="which output kinds to write (default both)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ionoline",
        description="Reports for ionic-channel links, power and failover. "
                    "IONOLINE_SEED is reserved; all commands are deterministic.")
    _add_shared(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        p = sub.add_parser(name, **kw)
        _add_shared(p, top=False)
        return p

    p = add_parser("impedance", help="impedance sweeps per channel length")
    p.add_argument("--lengths", type=float, nargs="*",
                   default=list(link.DEFAULT_LENGTHS), metavar="M")
    p.set_defaults(func=cmd_impedance)

    p = add_parser("freqresponse", help="receiver gain vs frequency")
    p.add_argument("--conditioned", action="store_true",
                   help="buffered receiver (default: bare pin)")
    p.add_argument("--length", type=float, default=1.4, metavar="M")
    p.set_defaults(func=cmd_freqresponse)

    p = add_parser("linkmatrix", help="packet outcomes per length x baud")
    p.add_argument("--conditioned", action="store_true")
    p.set_defaults(func=cmd_linkmatrix)

    p = add_parser("knob", help="one potentiometer reading through the long link")
    p.add_argument("pot_value", type=int)
    p.set_defaults(func=cmd_knob)

    p = add_parser("battery", help="constant-current cycling table")
    p.add_argument("--cycles", type=int, default=5)
    p.set_defaults(func=cmd_battery)

    p = add_parser("duplex", help="two-node failover event trace")
    p.add_argument("scenario", nargs="?", default=None,
                   help="fault schedule file (t_s inject <event> <node> per line)")
    p.add_argument("--t-end", type=float, default=60.0)
    p.set_defaults(func=cmd_duplex)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.calibration is not None:
            cal = load_calibration(args.calibration)
        elif Path(DEFAULT_CALIBRATION_FILE).exists():
            cal = load_calibration(DEFAULT_CALIBRATION_FILE)
        else:
            cal = DEFAULT_CALIBRATION
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs = args.func(args, cal, out_dir)
        parameters = {k: v for k, v in vars(args).items()
                      if k not in ("func", "command", "out_dir", "calibration", "format")}
        _write_manifest(out_dir, args.command, parameters, cal, outputs)
        return 0
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
