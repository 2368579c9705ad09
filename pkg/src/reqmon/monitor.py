"""Stream-monitor compilation and constant-memory online execution.

A formula compiles to a topologically ordered list of stream nodes, one
per subterm.  Each node keeps a fixed-capacity ring buffer of its own past
values, sized by the deepest lookback any consumer performs:

    Y          reads its child 1 step back
    O[a,b]     reads its child up to b steps back
    H[a,b]     reads its child up to b steps back
    f S[a,b] g reads g up to b steps back; the continuity side f needs no
               buffer, a saturating run-length counter carries it

Total memory is a static function of the spec.  One step: compute all
node values against the current inputs, push them into the buffers, fire
the triggers whose guard stream is true.  Guards are the negation of the
requirement formula, so a firing marks a violation step.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import (UninitializedExternError, UnknownExternError,
                     UnsupportedOperatorError)
from .formalize import ComponentSpec
from .ptmtl import (MAnd, MAtom, MFirst, MHistorically, MImplies, MNot, MOnce,
                    MOr, MSince, MtlFormula, MYesterday, PAST_NODE_TYPES,
                    to_smv_string)
from .semantics import eval_expr


def derive_handler_name(req_id: str) -> str:
    """Violation handler name: 'handlerprop' + id, non-alphanumerics -> '_'."""
    return "handlerprop" + re.sub(r"[^A-Za-z0-9]", "_", req_id)


@dataclass(frozen=True)
class ExternDecl:
    name: str
    kind: str  # "numeric" | "boolean"


@dataclass(frozen=True)
class StreamNode:
    sid: int
    op: str  # atom|not|and|or|implies|first|yesterday|once|hist|since
    args: tuple[int, ...] = ()
    lo: int = 0
    hi: int = 0
    expr: object = None  # atom expression
    buffer_len: int = 0  # past values retained (0 = none)


@dataclass(frozen=True)
class TriggerDef:
    handler_name: str
    guard: int
    requirement_id: str


@dataclass(frozen=True)
class MonitorSpec:
    externs: tuple[ExternDecl, ...]
    streams: tuple[StreamNode, ...]
    triggers: tuple[TriggerDef, ...]

    def extern_names(self) -> list[str]:
        return [e.name for e in self.externs]

    def to_debug_json(self) -> str:
        """Unstable dump for inspection only."""
        doc = {
            "externs": [{"name": e.name, "kind": e.kind} for e in self.externs],
            "streams": [
                {"sid": s.sid, "op": s.op, "args": list(s.args),
                 "lo": s.lo, "hi": s.hi, "buffer_len": s.buffer_len,
                 "expr": None if s.expr is None
                 else to_smv_string(MAtom(s.expr))}
                for s in self.streams
            ],
            "triggers": [
                {"handler": t.handler_name, "guard": t.guard,
                 "requirement": t.requirement_id}
                for t in self.triggers
            ],
        }
        return json.dumps(doc, indent=2) + "\n"


class _Builder:
    def __init__(self):
        self.nodes: list[dict] = []

    def add(self, op: str, args: tuple[int, ...] = (), lo: int = 0,
            hi: int = 0, expr=None) -> int:
        sid = len(self.nodes)
        self.nodes.append({"sid": sid, "op": op, "args": args, "lo": lo,
                           "hi": hi, "expr": expr, "need": 0})
        return sid

    def want(self, sid: int, lookback: int):
        if lookback > self.nodes[sid]["need"]:
            self.nodes[sid]["need"] = lookback

    def build_formula(self, f: MtlFormula) -> int:
        if type(f) not in PAST_NODE_TYPES:
            raise UnsupportedOperatorError(
                "operator %s is not past-time" % type(f).__name__)
        if isinstance(f, MAtom):
            return self.add("atom", expr=f.expr)
        if isinstance(f, MFirst):
            return self.add("first")
        if isinstance(f, MNot):
            c = self.build_formula(f.operand)
            return self.add("not", (c,))
        if isinstance(f, MAnd):
            a, b = self.build_formula(f.lhs), self.build_formula(f.rhs)
            return self.add("and", (a, b))
        if isinstance(f, MOr):
            a, b = self.build_formula(f.lhs), self.build_formula(f.rhs)
            return self.add("or", (a, b))
        if isinstance(f, MImplies):
            a, b = self.build_formula(f.lhs), self.build_formula(f.rhs)
            return self.add("implies", (a, b))
        if isinstance(f, MYesterday):
            c = self.build_formula(f.operand)
            self.want(c, 1)
            return self.add("yesterday", (c,))
        if isinstance(f, MOnce):
            c = self.build_formula(f.operand)
            self.want(c, f.hi)
            return self.add("once", (c,), f.lo, f.hi)
        if isinstance(f, MHistorically):
            c = self.build_formula(f.operand)
            self.want(c, f.hi)
            return self.add("hist", (c,), f.lo, f.hi)
        if isinstance(f, MSince):
            a = self.build_formula(f.lhs)   # continuity, run counter
            b = self.build_formula(f.rhs)   # witness, buffered
            self.want(b, f.hi)
            return self.add("since", (a, b), f.lo, f.hi)
        raise UnsupportedOperatorError("unknown node %r" % (f,))


def compile_monitor(spec: ComponentSpec) -> MonitorSpec:
    """One guard stream (negated formula) and one trigger per requirement."""
    builder = _Builder()
    triggers = []
    handlers_seen: dict[str, str] = {}
    for req in spec.requirements:
        guard = builder.add("not", (builder.build_formula(req.ptmtl),))
        handler = derive_handler_name(req.id)
        if handler in handlers_seen:
            raise ValueError(
                "handler name %r derived for both %r and %r"
                % (handler, handlers_seen[handler], req.id))
        handlers_seen[handler] = req.id
        triggers.append(TriggerDef(handler_name=handler, guard=guard,
                                   requirement_id=req.id))
    streams = tuple(StreamNode(sid=n["sid"], op=n["op"], args=n["args"],
                               lo=n["lo"], hi=n["hi"], expr=n["expr"],
                               buffer_len=n["need"])
                    for n in builder.nodes)
    externs = tuple(ExternDecl(v.name, v.kind) for v in spec.variables)
    return MonitorSpec(externs=externs, streams=streams,
                       triggers=tuple(triggers))


class _Ring:
    """Fixed-capacity ring of booleans; index 1..len gives steps back."""

    __slots__ = ("cap", "data", "write", "count")

    def __init__(self, cap: int):
        self.cap = cap
        self.data = [False] * cap
        self.write = 0
        self.count = 0

    def push(self, value: bool):
        if self.cap == 0:
            return
        self.data[self.write] = value
        self.write = (self.write + 1) % self.cap
        if self.count < self.cap:
            self.count += 1

    def back(self, k: int) -> bool:
        # value k steps before the current (unpushed) step, k in 1..count
        return self.data[(self.write - k) % self.cap]


class MonitorState:
    """Single-owner mutable execution state for a MonitorSpec."""

    def __init__(self, spec: MonitorSpec):
        self.spec = spec
        self._kinds = {e.name: e.kind for e in spec.externs}
        self._values: dict[str, float | bool] = {}
        self._rings = [_Ring(s.buffer_len) for s in spec.streams]
        self._since_runs = {s.sid: 0 for s in spec.streams if s.op == "since"}
        self.steps_taken = 0

    # inputs ---------------------------------------------------------------

    def set_input(self, name: str, value: float | bool) -> None:
        kind = self._kinds.get(name)
        if kind is None:
            raise UnknownExternError("no extern named '%s'" % name)
        if kind == "boolean":
            if not isinstance(value, bool):
                raise TypeError("extern '%s' is boolean" % name)
            self._values[name] = value
        else:
            if isinstance(value, bool):
                raise TypeError("extern '%s' is numeric" % name)
            self._values[name] = float(value)

    def get_input(self, name: str):
        if name not in self._kinds:
            raise UnknownExternError("no extern named '%s'" % name)
        return self._values.get(name)

    @property
    def initialized(self) -> bool:
        return len(self._values) == len(self._kinds)

    def uninitialized_externs(self) -> list[str]:
        return [e.name for e in self.spec.externs if e.name not in self._values]

    # stepping -------------------------------------------------------------

    def step(self) -> list[str]:
        """Advance one step; returns fired handler names in trigger order."""
        missing = self.uninitialized_externs()
        if missing:
            raise UninitializedExternError(
                "externs never set: %s" % ", ".join(missing))
        t = self.steps_taken
        vals: list[bool] = [False] * len(self.spec.streams)
        new_runs: dict[int, int] = {}
        for node in self.spec.streams:
            vals[node.sid] = self._compute(node, vals, t, new_runs)
        for node in self.spec.streams:
            self._rings[node.sid].push(vals[node.sid])
        for sid, run in new_runs.items():
            cap = self.spec.streams[sid].hi + 1
            self._since_runs[sid] = min(run, cap)
        self.steps_taken = t + 1
        return [trig.handler_name for trig in self.spec.triggers
                if vals[trig.guard]]

    def _value_at(self, sid: int, offset: int, vals: list[bool]) -> bool:
        if offset == 0:
            return vals[sid]
        return self._rings[sid].back(offset)

    def _compute(self, node: StreamNode, vals: list[bool], t: int,
                 new_runs: dict[int, int]) -> bool:
        op = node.op
        if op == "atom":
            return bool(eval_expr(node.expr, self._values))
        if op == "first":
            return t == 0
        if op == "not":
            return not vals[node.args[0]]
        if op == "and":
            return vals[node.args[0]] and vals[node.args[1]]
        if op == "or":
            return vals[node.args[0]] or vals[node.args[1]]
        if op == "implies":
            return (not vals[node.args[0]]) or vals[node.args[1]]
        if op == "yesterday":
            return t > 0 and self._rings[node.args[0]].back(1)
        if op == "once":
            c = node.args[0]
            for k in range(node.lo, node.hi + 1):
                if k <= t and self._value_at(c, k, vals):
                    return True
            return False
        if op == "hist":
            if t < node.hi:
                return False
            c = node.args[0]
            for k in range(node.lo, node.hi + 1):
                if not self._value_at(c, k, vals):
                    return False
            return True
        if op == "since":
            phi, psi = node.args
            run = self._since_runs[node.sid] + 1 if vals[phi] else 0
            new_runs[node.sid] = run
            for d in range(node.lo, node.hi + 1):
                if d <= t and run >= d and self._value_at(psi, d, vals):
                    return True
            return False
        raise UnsupportedOperatorError("unknown stream op %r" % op)

    # introspection --------------------------------------------------------

    def buffer_capacities(self) -> list[int]:
        """Static ring capacities; constant across the run by construction."""
        return [ring.cap for ring in self._rings]

    def snapshot_inputs(self) -> dict[str, float | bool]:
        return dict(self._values)
