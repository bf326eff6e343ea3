#!/usr/bin/env python3
"""Cycle the zinc-iodine module and budget the electronics it can feed.

Two flow cells in series give 2.2 V at their 124 mA operating point.
That is not enough for 5 V logic on its own, so the rail goes through a
boost converter; this script checks how much power is left after the
conversion loss and the transceiver load.
"""

from pathlib import Path

from ionoline import CellConfig, cycle, power_budget, terminal_voltage
from ionoline.battery import write_cycle_csv
from ionoline.svgplot import write_plot

OUT = Path(__file__).parent / "out"


def main() -> None:
    OUT.mkdir(exist_ok=True)
    cfg = CellConfig()

    v = terminal_voltage(cfg, soc=0.2, current_a=0.124)
    print(f"Module terminal voltage at 124 mA discharge: {v:.3f} V")
    budget = power_budget(v * 0.124)
    print(f"Source power: {budget.source_power_w * 1e3:.1f} mW")
    print(f"After {budget.boost_efficiency:.0%} boost efficiency and a "
          f"{budget.load_power_w * 1e3:.0f} mW load: "
          f"{budget.margin_w * 1e3:.1f} mW to spare "
          f"({'sufficient' if budget.sufficient else 'SHORT'})")

    print("\nRunning 5 constant-current cycles between 5% and 95% SOC...")
    trace = cycle(cfg, n_cycles=5)
    hours = trace.t_s[-1] / 3600
    print(f"  {trace.half_cycles} half-cycles over {hours:.0f} h, "
          f"SOC {trace.soc.min():.2f}..{trace.soc.max():.2f}, "
          f"voltage {trace.voltage_v.min():.2f}..{trace.voltage_v.max():.2f} V")

    write_cycle_csv(OUT / "battery_cycles.csv", trace)
    write_plot(OUT / "battery_cycles.svg",
               [("module voltage", trace.t_s / 3600, trace.voltage_v),
                ("SOC", trace.t_s / 3600, trace.soc)],
               title="Constant-current cycling",
               xlabel="time (h)", ylabel="V / SOC")
    print(f"\nWrote battery_cycles.csv and .svg to {OUT}/")


if __name__ == "__main__":
    main()
