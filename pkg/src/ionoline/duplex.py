"""Two-node blink-and-pulse failover protocol.

Each node drives a ring of LEDs and shares a channel with its peer. In
CONNECTED mode the nodes take turns: a node runs its blink sequence, emits
a handshake pulse (one serial byte through the simulated link), and waits
for the peer's pulse before blinking again. The left node starts. A node
that waits longer than the peer timeout switches to AUTONOMOUS and blinks
continuously on its own; a pulse arriving later re-joins it (enabled by
default). Power loss silences a node entirely; events delivered to an
unpowered node are dropped.

The simulation is a deterministic discrete-event loop: a global queue
ordered by (time, node, sequence number), pure per-node transitions in
`node_step`, and an append-only event trace. Identical configurations and
scenarios reproduce byte-identical traces.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import link
from .calibration import Calibration
from .channel import ChannelSpec, calibrated_channel
from .errors import InvalidInputError

NODES = ("left", "right")
_ORDER = {"left": 0, "right": 1}
INITIATOR = "left"  # fixed tie-break: left begins after simultaneous power-on

PULSE_BYTE = 0xA5

TRACE_CSV_HEADER = "t_s,node,event"

TRACE_EVENTS = frozenset({
    "power_on", "power_off", "blink_start", "blink_end",
    "pulse_sent", "pulse_received", "mode_switch", "channel_severed",
})


class Mode(enum.Enum):
    CONNECTED = "connected"
    AUTONOMOUS = "autonomous"


@dataclass(frozen=True)
class NodeState:
    """Per-node protocol state; never both blinking and awaiting in CONNECTED."""

    node_id: str
    mode: Mode = Mode.CONNECTED
    powered: bool = False
    blinking: bool = False
    blink_sequence_len: int = 12
    last_rx: float = 0.0
    awaiting_peer: bool = False
    blink_started_at: float | None = None

    def __post_init__(self):
        if self.node_id not in NODES:
            raise InvalidInputError(f"node_id must be one of {NODES}")
        if self.blink_sequence_len < 1:
            raise InvalidInputError("blink_sequence_len must be >= 1")
        if self.mode is Mode.CONNECTED and self.blinking and self.awaiting_peer:
            raise InvalidInputError("cannot blink and await simultaneously")
        if self.mode is Mode.AUTONOMOUS and self.awaiting_peer:
            raise InvalidInputError("AUTONOMOUS never waits on the peer")


@dataclass(frozen=True)
class DuplexConfig:
    """Channels, serial settings and protocol timing for a node pair.

    peer_timeout_s defaults to three full blink sequences, comfortably
    longer than the one-sequence turnaround of a healthy handshake.
    """

    channel_lr: ChannelSpec = field(default_factory=lambda: calibrated_channel(1.0))
    channel_rl: ChannelSpec = field(default_factory=lambda: calibrated_channel(1.0))
    baud: int = 9600
    blink_step_s: float = 0.1
    blink_sequence_len: int = 12
    peer_timeout_s: float | None = None
    rejoin: bool = True

    def __post_init__(self):
        if not self.blink_step_s > 0:
            raise InvalidInputError("blink_step_s must be > 0")
        if self.blink_sequence_len < 1:
            raise InvalidInputError("blink_sequence_len must be >= 1")
        if self.peer_timeout_s is None:
            object.__setattr__(self, "peer_timeout_s", 3.0 * self.blink_duration_s)
        if not self.peer_timeout_s > self.blink_duration_s:
            raise InvalidInputError("peer_timeout_s must exceed one blink sequence")

    @property
    def blink_duration_s(self) -> float:
        return self.blink_step_s * self.blink_sequence_len

    @property
    def pulse_transit_s(self) -> float:
        # one 8N1 frame of flight time
        return 10.0 / self.baud


@dataclass(frozen=True)
class TraceEvent:
    t_s: float
    node: str
    event: str


def node_step(state: NodeState, cfg: DuplexConfig, event: str,
              now: float) -> tuple[NodeState, list[str]]:
    """Pure transition of one node; returns the new state and its actions.

    Events: power_on, power_off, pulse_received, tick. A tick is any
    scheduled wake-up; the node decides from its own state whether it
    ends a blink sequence or trips the peer timeout. Actions are the
    trace-event names the node emits, in order ('pulse_send' asks the
    simulator to attempt a delivery and is traced as pulse_sent).
    """
    if not state.powered:
        if event == "power_on":
            st = replace(state, powered=True, mode=Mode.CONNECTED, blinking=False,
                         awaiting_peer=False, last_rx=now, blink_started_at=None)
            actions = ["power_on"]
            if state.node_id == INITIATOR:
                st = replace(st, blinking=True, blink_started_at=now)
                actions.append("blink_start")
            return st, actions
        return state, []  # unpowered: event dropped

    if event == "power_on":
        return state, []
    if event == "power_off":
        return replace(state, powered=False, blinking=False, awaiting_peer=False,
                       blink_started_at=None), ["power_off"]

    if event == "pulse_received":
        st = replace(state, last_rx=now, awaiting_peer=False)
        actions = ["pulse_received"]
        if state.mode is Mode.AUTONOMOUS:
            if not cfg.rejoin:
                return replace(state, last_rx=now), actions
            st = replace(st, mode=Mode.CONNECTED)
            actions.append("mode_switch")
        if not st.blinking:
            st = replace(st, blinking=True, blink_started_at=now)
            actions.append("blink_start")
        return st, actions

    if event == "tick":
        if state.blinking and now >= state.blink_started_at + cfg.blink_duration_s - 1e-12:
            if state.mode is Mode.CONNECTED:
                st = replace(state, blinking=False, blink_started_at=None,
                             awaiting_peer=True)
                return st, ["blink_end", "pulse_send"]
            # autonomous: roll straight into the next sequence
            st = replace(state, blink_started_at=now)
            return st, ["blink_end", "blink_start"]
        # deadline computed as last_rx + timeout, never as a time difference,
        # so a tick scheduled at exactly the deadline trips it
        if (state.mode is Mode.CONNECTED and not state.blinking
                and now >= state.last_rx + cfg.peer_timeout_s):
            st = replace(state, mode=Mode.AUTONOMOUS, awaiting_peer=False,
                         blinking=True, blink_started_at=now)
            return st, ["mode_switch", "blink_start"]
        return state, []

    raise InvalidInputError(f"unknown event {event!r}")


def parse_scenario(text: str) -> list[tuple[float, str, str]]:
    """Fault schedule, one `t_s inject <event> <node>` per line.

    Events: power_off, power_on, channel_severed. For channel_severed the
    node names the transmitting side of the cut direction; sever both
    lines with two entries. '#' comments and blank lines are fine.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[1] != "inject":
            raise InvalidInputError(
                f"line {lineno}: expected 't_s inject <event> <node>', got {raw!r}")
        try:
            t = float(parts[0])
        except ValueError as exc:
            raise InvalidInputError(f"line {lineno}: bad time {parts[0]!r}") from exc
        event, node = parts[2], parts[3]
        if event not in ("power_off", "power_on", "channel_severed"):
            raise InvalidInputError(f"line {lineno}: unknown event {event!r}")
        if node not in NODES:
            raise InvalidInputError(f"line {lineno}: unknown node {node!r}")
        if t < 0:
            raise InvalidInputError(f"line {lineno}: time must be >= 0")
        out.append((t, event, node))
    return out


def _other(node: str) -> str:
    return "right" if node == "left" else "left"


def simulate(cfg: DuplexConfig, scenario: list[tuple[float, str, str]] = (),
             t_end: float = 60.0,
             calibration: Calibration | None = None) -> list[TraceEvent]:
    """Run both nodes from simultaneous power-on at t = 0 until t_end.

    Pulse delivery goes through the full link simulation once per
    direction (the link is deterministic, so the outcome is reused for
    every pulse) and takes one frame time in flight. Severed directions
    and unpowered receivers drop pulses silently.
    """
    if not t_end > 0:
        raise InvalidInputError("t_end must be > 0")

    def link_ok(spec: ChannelSpec) -> bool:
        lc = link.LinkConfig(channel=spec, conditioned=True,
                             uart=link.UartConfig(baud=cfg.baud))
        return link.run_link(lc, [PULSE_BYTE], calibration).packets_lost == 0

    deliverable = {"left": link_ok(cfg.channel_lr), "right": link_ok(cfg.channel_rl)}
    severed = {"left": False, "right": False}

    states = {n: NodeState(node_id=n, blink_sequence_len=cfg.blink_sequence_len)
              for n in NODES}
    trace: list[TraceEvent] = []
    queue: list[tuple[float, int, int, str, str]] = []
    seq = 0

    def push(t: float, kind: str, node: str):
        nonlocal seq
        heapq.heappush(queue, (t, _ORDER[node], seq, kind, node))
        seq += 1

    for node in NODES:
        push(0.0, "power_on", node)
    for t, event, node in scenario:
        push(t, "sever" if event == "channel_severed" else event, node)

    while queue:
        t, _, _, kind, node = heapq.heappop(queue)
        if t > t_end:
            break
        if kind == "sever":
            severed[node] = True
            trace.append(TraceEvent(t, node, "channel_severed"))
            continue

        st, actions = node_step(states[node], cfg, kind, t)
        states[node] = st
        for action in actions:
            if action == "pulse_send":
                trace.append(TraceEvent(t, node, "pulse_sent"))
                if deliverable[node] and not severed[node]:
                    push(t + cfg.pulse_transit_s, "pulse_received", _other(node))
            else:
                trace.append(TraceEvent(t, node, action))

        if "blink_start" in actions:
            push(st.blink_started_at + cfg.blink_duration_s, "tick", node)
        if st.powered and st.mode is Mode.CONNECTED and not st.blinking:
            t_check = st.last_rx + cfg.peer_timeout_s
            if t_check > t:
                push(t_check, "tick", node)
    return trace


def check_trace(trace: list[TraceEvent]) -> None:
    """Assert the structural trace invariants (timestamps, pulse causality)."""
    in_flight = {"left": 0, "right": 0}
    prev = -float("inf")
    for ev in trace:
        if ev.t_s < prev:
            raise AssertionError(f"timestamps regress at {ev}")
        prev = ev.t_s
        if ev.event not in TRACE_EVENTS:
            raise AssertionError(f"unknown trace event {ev.event!r}")
        if ev.event == "pulse_sent":
            in_flight[ev.node] += 1
        elif ev.event == "pulse_received":
            sender = _other(ev.node)
            if in_flight[sender] < 1:
                raise AssertionError(f"pulse_received without matching send: {ev}")
            in_flight[sender] -= 1


def write_trace_csv(path: str | Path, trace: list[TraceEvent]) -> None:
    lines = [TRACE_CSV_HEADER]
    for ev in trace:
        lines.append(f"{ev.t_s:.12g},{ev.node},{ev.event}")
    Path(path).write_text("\n".join(lines) + "\n")
