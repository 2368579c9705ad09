"""Deterministic in-process publish-subscribe bus hosting interpreted monitors.

Delivery order is total: trace events are replayed grouped by timestamp in
file order, and each hosted node acts at the end of every time instant.
Real middleware is asynchronous; determinism here is what makes replay
results comparable against the offline oracle.

Evaluation policies:

    OnAnyMessage        step at every instant that delivered at least one
                        input message, after applying all of its updates
                        (simultaneous messages form one step)
    OnAllInputsChanged  step once every input has a fresh sample since the
                        last step
    FixedClock(p)       step at times 0, p, 2p, ... regardless of cadence;
                        messages at the tick time are applied first

A monitor never steps before every input received one message.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import TopicTypeMismatchError, TraceFormatError
from .monitor import MonitorSpec, MonitorState
from .nodegen import NodePlan

Payload = float | bool | None  # None is the empty (violation) payload


@dataclass(frozen=True)
class BusMessage:
    seq: int
    time: float
    topic: str
    payload: Payload


@dataclass(frozen=True)
class LogLine:
    text: str


@dataclass(frozen=True)
class TraceEvent:
    time: float
    topic: str
    payload: Payload


@dataclass(frozen=True)
class ReplayTrace:
    events: tuple[TraceEvent, ...]

    def __post_init__(self):
        last = None
        for ev in self.events:
            if ev.time < 0:
                raise ValueError("event time must be non-negative")
            if last is not None and ev.time < last:
                raise ValueError("event times must be non-decreasing")
            last = ev.time

    @property
    def max_time(self) -> float:
        return self.events[-1].time if self.events else 0.0


@dataclass(frozen=True)
class OnAnyMessage:
    pass


@dataclass(frozen=True)
class OnAllInputsChanged:
    pass


@dataclass(frozen=True)
class FixedClock:
    period: float

    def __post_init__(self):
        if not (self.period > 0):
            raise ValueError("FixedClock period must be > 0")


EvalPolicy = OnAnyMessage | OnAllInputsChanged | FixedClock


class SimBus:
    """Synchronous bus: publish delivers to every current subscriber
    immediately, so caused messages interleave at their causal position."""

    def __init__(self):
        self._subscribers: dict[str, list] = {}
        self._nodes: list = []
        self.log: list[BusMessage | LogLine] = []
        self._seq = 0

    def subscribe(self, topic: str, callback) -> None:
        self._subscribers.setdefault(topic, []).append(callback)

    def add_node(self, node) -> None:
        self._nodes.append(node)

    def publish(self, time: float, topic: str, payload: Payload) -> BusMessage:
        msg = BusMessage(seq=self._seq, time=time, topic=topic, payload=payload)
        self._seq += 1
        self.log.append(msg)
        for callback in self._subscribers.get(topic, []):
            callback(msg)
        return msg

    def log_line(self, text: str) -> None:
        self.log.append(LogLine(text))

    def end_instant(self, time: float, ticking: set | None = None) -> None:
        for node in self._nodes:
            node.on_instant(time, ticked=(ticking is not None and node in ticking))

    def replay(self, trace: ReplayTrace) -> list[BusMessage | LogLine]:
        """Deliver all trace events plus policy clock ticks; returns the log."""
        tick_owners: dict[float, set] = {}
        for node in self._nodes:
            for t in getattr(node, "tick_times", lambda _: [])(trace.max_time):
                tick_owners.setdefault(t, set()).add(node)

        instants = sorted({ev.time for ev in trace.events} | set(tick_owners))
        i = 0
        for instant in instants:
            while i < len(trace.events) and trace.events[i].time <= instant:
                ev = trace.events[i]
                self.publish(ev.time, ev.topic, ev.payload)
                i += 1
            self.end_instant(instant, ticking=tick_owners.get(instant, set()))
        return self.log


class HostedMonitor:
    """Monitor node on the bus, wired per a NodePlan."""

    def __init__(self, bus: SimBus, plan: NodePlan, mspec: MonitorSpec,
                 policy: EvalPolicy, record_steps: bool = False):
        self.bus = bus
        self.plan = plan
        self.policy = policy
        self.state = MonitorState(mspec)
        self._kinds = {e.name: e.kind for e in mspec.externs}
        self._topic_var = {s.topic: s.variable for s in plan.subscriptions}
        self._violation_topic = {p.handler: p.topic for p in plan.publishers}
        self._fresh: set[str] = set()
        self._got_input = False
        self.record_steps = record_steps
        self.step_log: list[tuple[float, dict]] = []  # (time, input snapshot)
        for sub in plan.subscriptions:
            bus.subscribe(sub.topic, self._make_input_callback(sub.variable))
        bus.add_node(self)

    def _make_input_callback(self, variable: str):
        kind = self._kinds[variable]

        def on_message(msg: BusMessage):
            payload = msg.payload
            if payload is None:
                raise TopicTypeMismatchError(
                    "empty message on input topic '%s'" % msg.topic)
            is_bool = isinstance(payload, bool)
            if kind == "boolean" and not is_bool:
                raise TopicTypeMismatchError(
                    "numeric message on boolean topic '%s'" % msg.topic)
            if kind == "numeric" and is_bool:
                raise TopicTypeMismatchError(
                    "boolean message on numeric topic '%s'" % msg.topic)
            self.state.set_input(variable, payload)
            self._fresh.add(variable)
            self._got_input = True

        return on_message

    def tick_times(self, max_time: float) -> list[float]:
        if not isinstance(self.policy, FixedClock):
            return []
        ticks = []
        k = 0
        while True:
            t = k * self.policy.period
            if t > max_time:
                break
            ticks.append(t)
            k += 1
        return ticks

    def _wants_step(self, ticked: bool) -> bool:
        if isinstance(self.policy, OnAnyMessage):
            return self._got_input
        if isinstance(self.policy, OnAllInputsChanged):
            return self._fresh == set(self._kinds)
        return ticked

    def on_instant(self, time: float, ticked: bool) -> None:
        wants = self._wants_step(ticked)
        self._got_input = False
        if not wants or not self.state.initialized:
            return
        self._fresh = set()
        if self.record_steps:
            self.step_log.append((time, self.state.snapshot_inputs()))
        for handler in self.state.step():
            self.bus.publish(time, self._violation_topic[handler], None)


def attach_monitor(bus: SimBus, plan: NodePlan, mspec: MonitorSpec,
                   policy: EvalPolicy, record_steps: bool = False) -> HostedMonitor:
    return HostedMonitor(bus, plan, mspec, policy, record_steps=record_steps)


class LoggerNode:
    """Mirrors every violation topic into human-readable run-log lines."""

    def __init__(self, bus: SimBus, plan: NodePlan):
        self.bus = bus
        for sub in plan.logger_subscriptions:
            bus.subscribe(sub.topic, self._make_callback(sub.handler))

    def _make_callback(self, handler: str):
        def on_message(msg: BusMessage):
            self.bus.log_line("violation: %s at seq %d" % (handler, msg.seq))
        return on_message


def logger_node(bus: SimBus, plan: NodePlan) -> LoggerNode:
    return LoggerNode(bus, plan)


# trace / run-log files ------------------------------------------------------

def trace_from_jsonl(text: str) -> ReplayTrace:
    events: list[TraceEvent] = []
    last_time = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceFormatError("not valid JSON (%s)" % exc.msg, lineno) from None
        if not isinstance(doc, dict):
            raise TraceFormatError("expected an object", lineno)
        try:
            t = doc["t"]
            topic = doc["topic"]
            value = doc["value"]
        except KeyError as exc:
            raise TraceFormatError("missing field %s" % exc, lineno) from None
        if isinstance(t, bool) or not isinstance(t, (int, float)) \
                or not math.isfinite(t) or t < 0:
            raise TraceFormatError("'t' must be a non-negative number", lineno)
        if not isinstance(topic, str) or not topic:
            raise TraceFormatError("'topic' must be a non-empty string", lineno)
        if not isinstance(value, bool) and not isinstance(value, (int, float)):
            raise TraceFormatError("'value' must be a number or boolean", lineno)
        if last_time is not None and t < last_time:
            raise TraceFormatError("'t' went backwards", lineno)
        last_time = t
        payload: Payload = value if isinstance(value, bool) else float(value)
        events.append(TraceEvent(time=float(t), topic=topic, payload=payload))
    return ReplayTrace(events=tuple(events))


def load_trace_file(path) -> ReplayTrace:
    with open(path, "r", encoding="utf-8") as fh:
        return trace_from_jsonl(fh.read())


def run_log_to_jsonl(log: list[BusMessage | LogLine]) -> str:
    lines = []
    for entry in log:
        if isinstance(entry, BusMessage):
            lines.append(json.dumps({"seq": entry.seq, "t": entry.time,
                                     "topic": entry.topic,
                                     "value": entry.payload}))
        else:
            lines.append(json.dumps({"log": entry.text}))
    return "\n".join(lines) + ("\n" if lines else "")


def violation_counts(log, plan: NodePlan) -> dict[str, int]:
    """Violation messages per requirement id, in publisher order."""
    by_topic: dict[str, str] = {p.topic: p.requirement_id for p in plan.publishers}
    counts = {p.requirement_id: 0 for p in plan.publishers}
    for entry in log:
        if isinstance(entry, BusMessage) and entry.topic in by_topic:
            counts[by_topic[entry.topic]] += 1
    return counts
