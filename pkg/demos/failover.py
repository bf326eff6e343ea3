#!/usr/bin/env python3
"""Two lamps sharing one channel: alternate politely, survive alone.

Each node runs its 12-step blink sequence, then sends a single byte
through the channel to hand the floor to its peer. If the peer stops
answering for three blink durations, the node stops waiting and blinks
on its own. This script runs a healthy hour-scale trace and two fault
injections and prints what each node saw.
"""

from pathlib import Path

from ionoline import DuplexConfig, parse_scenario, simulate
from ionoline.duplex import write_trace_csv

OUT = Path(__file__).parent / "out"


def recap(title: str, trace) -> None:
    print(f"\n{title}")
    switches = [ev for ev in trace if ev.event == "mode_switch"]
    starts = [ev for ev in trace if ev.event == "blink_start"]
    print(f"  {len(starts)} blink sequences, {len(switches)} mode switches")
    for ev in switches:
        print(f"  t={ev.t_s:7.3f}s  {ev.node} gave up on its peer and went"
              f" autonomous")
    tail = [ev for ev in trace[-6:]]
    print("  last events:")
    for ev in tail:
        print(f"    {ev.t_s:8.3f}s {ev.node:5s} {ev.event}")


def main() -> None:
    OUT.mkdir(exist_ok=True)
    cfg = DuplexConfig()
    print(f"blink {cfg.blink_duration_s:.1f}s, peer timeout"
          f" {cfg.peer_timeout_s:.1f}s, pulse flight"
          f" {cfg.pulse_transit_s * 1e3:.1f}ms")

    healthy = simulate(cfg, t_end=60.0)
    recap("healthy operation, 60 s window", healthy)
    write_trace_csv(OUT / "trace_healthy.csv", healthy)

    cut = simulate(cfg, parse_scenario("20.0 inject power_off right"),
                   t_end=60.0)
    recap("right node loses power at t=20s", cut)
    write_trace_csv(OUT / "trace_power_cut.csv", cut)

    severed = simulate(cfg, parse_scenario(
        "20.0 inject channel_severed left\n"
        "20.0 inject channel_severed right"), t_end=60.0)
    recap("channel cut both ways at t=20s", severed)
    write_trace_csv(OUT / "trace_severed.csv", severed)

    print(f"\nWrote the three traces to {OUT}/")


if __name__ == "__main__":
    main()
