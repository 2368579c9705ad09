"""C99 emission for a compiled monitor.

The emitted pair (monitor.h, monitor.c) follows the embedded contract:
inputs are globals, `step()` advances the monitor one step, and each
requirement's handler is an extern function the integrator implements.
Everything is statically allocated; the only loop bounds are compile-time
constants, so the code is suitable for hard-real-time use.
"""

from __future__ import annotations

from dataclasses import dataclass

from .monitor import MonitorSpec, StreamNode
from .reqast import Arith, BoolLit, Cmp, Expr, Neg, Num, Var


@dataclass(frozen=True)
class EmittedPackage:
    files: dict[str, str]

    def file(self, path: str) -> str:
        return self.files[path]


def _c_number(v: int | float) -> str:
    if isinstance(v, int):
        return "%d.0" % v
    return repr(float(v))


def _c_expr(e: Expr, kinds: dict[str, str], parenthesize: bool = False) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Num):
        return _c_number(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, Neg):
        return "-" + _c_expr(e.operand, kinds, parenthesize=True)
    if isinstance(e, (Arith, Cmp)):
        s = "%s %s %s" % (_c_expr(e.lhs, kinds, parenthesize=True), e.op,
                          _c_expr(e.rhs, kinds, parenthesize=True))
        return "(" + s + ")" if parenthesize else s
    raise TypeError("node not allowed inside an atom: %r" % (e,))


def _uses_age(streams) -> bool:
    return any(s.op in ("first", "yesterday", "once", "hist", "since")
               for s in streams)


def emit_c99(m: MonitorSpec, float_inputs: bool = False) -> EmittedPackage:
    """Emit monitor.h / monitor.c. Numeric inputs are double unless
    `float_inputs` asks for the narrower embedded-style float."""
    numeric_ty = "float" if float_inputs else "double"
    kinds = {e.name: e.kind for e in m.externs}

    header: list[str] = []
    header.append("#ifndef MONITOR_H")
    header.append("#define MONITOR_H")
    header.append("")
    header.append("/* Generated runtime monitor.")
    header.append(" * Single-threaded: callers must serialize input writes")
    header.append(" * and step() calls. */")
    header.append("")
    header.append("#include <stdbool.h>")
    header.append("")
    for e in m.externs:
        ty = "bool" if e.kind == "boolean" else numeric_ty
        header.append("extern %s %s;" % (ty, e.name))
    if m.externs:
        header.append("")
    header.append("void step(void);")
    if m.triggers:
        header.append("")
    for t in m.triggers:
        header.append("extern void %s(void);" % t.handler_name)
    header.append("")
    header.append("#endif /* MONITOR_H */")

    src: list[str] = []
    src.append('#include "monitor.h"')
    uses_age = _uses_age(m.streams)
    if uses_age:
        src.append("#include <stdint.h>")
    src.append("")
    for e in m.externs:
        ty = "bool" if e.kind == "boolean" else numeric_ty
        src.append("%s %s;" % (ty, e.name))
    if m.externs:
        src.append("")

    if uses_age:
        max_bound = 0
        for s in m.streams:
            max_bound = max(max_bound, s.hi, s.buffer_len,
                            1 if s.op == "yesterday" else 0)
        age_cap = max_bound + 1
        src.append("/* saturating step counter; %du is deep enough for every"
                   " window */" % age_cap)
        src.append("static uint32_t mon_age = 0u;")
        src.append("")

    for s in m.streams:
        if s.buffer_len > 0:
            src.append("static bool s%d_buf[%d];" % (s.sid, s.buffer_len))
            src.append("static uint32_t s%d_idx = 0u;" % s.sid)
        if s.op == "since":
            src.append("static uint32_t s%d_run = 0u;" % s.sid)
    if any(s.buffer_len > 0 or s.op == "since" for s in m.streams):
        src.append("")

    src.append("void step(void) {")
    body: list[str] = []
    for s in m.streams:
        body.extend(_emit_node(s, m.streams, kinds))
    for s in m.streams:
        if s.buffer_len > 0:
            body.append("s%d_buf[s%d_idx] = v%d;" % (s.sid, s.sid, s.sid))
            body.append("s%d_idx = (s%d_idx + 1u) %% %du;"
                        % (s.sid, s.sid, s.buffer_len))
        if s.op == "since":
            cap = s.hi + 1
            body.append("s%d_run = (r%d > %du) ? %du : r%d;"
                        % (s.sid, s.sid, cap, cap, s.sid))
    if uses_age:
        body.append("if (mon_age < %du) {" % age_cap)
        body.append("    mon_age = mon_age + 1u;")
        body.append("}")
    for t in m.triggers:
        body.append("if (v%d) {" % t.guard)
        body.append("    %s();" % t.handler_name)
        body.append("}")
    src.extend("    " + line if line else "" for line in body)
    src.append("}")

    return EmittedPackage(files={
        "monitor.h": "\n".join(header) + "\n",
        "monitor.c": "\n".join(src) + "\n",
    })


def _read_back(streams, sid: int, k_expr: str) -> str:
    """Ring read of stream `sid` at `k_expr` steps back (k >= 1)."""
    cap = streams[sid].buffer_len
    return "s%d_buf[(s%d_idx + %du - %s) %% %du]" % (sid, sid, cap, k_expr, cap)


def _value_at(streams, sid: int, k_literal: int) -> str:
    if k_literal == 0:
        return "v%d" % sid
    return _read_back(streams, sid, "%du" % k_literal)


def _emit_node(s: StreamNode, streams, kinds) -> list[str]:
    out: list[str] = []
    if s.op == "atom":
        out.append("bool v%d = %s;" % (s.sid, _c_expr(s.expr, kinds)))
    elif s.op == "first":
        out.append("bool v%d = (mon_age == 0u);" % s.sid)
    elif s.op == "not":
        out.append("bool v%d = !v%d;" % (s.sid, s.args[0]))
    elif s.op == "and":
        out.append("bool v%d = v%d && v%d;" % (s.sid, s.args[0], s.args[1]))
    elif s.op == "or":
        out.append("bool v%d = v%d || v%d;" % (s.sid, s.args[0], s.args[1]))
    elif s.op == "implies":
        out.append("bool v%d = !v%d || v%d;" % (s.sid, s.args[0], s.args[1]))
    elif s.op == "yesterday":
        out.append("bool v%d = (mon_age >= 1u) && %s;"
                   % (s.sid, _read_back(streams, s.args[0], "1u")))
    elif s.op == "once":
        c = s.args[0]
        out.append("bool v%d = false;" % s.sid)
        out.append("for (uint32_t k = %du; k <= %du; ++k) {" % (s.lo, s.hi))
        out.append("    if (mon_age >= k && %s) {"
                   % _loop_value(streams, c, "k"))
        out.append("        v%d = true;" % s.sid)
        out.append("        break;")
        out.append("    }")
        out.append("}")
    elif s.op == "hist":
        c = s.args[0]
        if s.hi == 0:  # window is just the current step (lo <= hi == 0)
            out.append("bool v%d = v%d;" % (s.sid, c))
            return out
        out.append("bool v%d = (mon_age >= %du);" % (s.sid, s.hi))
        out.append("if (v%d) {" % s.sid)
        out.append("    for (uint32_t k = %du; k <= %du; ++k) {" % (s.lo, s.hi))
        out.append("        if (!%s) {" % _loop_value(streams, c, "k"))
        out.append("            v%d = false;" % s.sid)
        out.append("            break;")
        out.append("        }")
        out.append("    }")
        out.append("}")
    elif s.op == "since":
        phi, psi = s.args
        out.append("uint32_t r%d = v%d ? (s%d_run + 1u) : 0u;"
                   % (s.sid, phi, s.sid))
        out.append("bool v%d = false;" % s.sid)
        out.append("for (uint32_t d = %du; d <= %du; ++d) {" % (s.lo, s.hi))
        out.append("    if (mon_age >= d && r%d >= d && %s) {"
                   % (s.sid, _loop_value(streams, psi, "d")))
        out.append("        v%d = true;" % s.sid)
        out.append("        break;")
        out.append("    }")
        out.append("}")
    else:
        raise TypeError("unknown stream op %r" % s.op)
    return out


def _loop_value(streams, sid: int, k_var: str) -> str:
    """Value of stream `sid` at loop offset `k_var`, 0 meaning this step."""
    if streams[sid].buffer_len == 0:
        # only reachable when the loop range is exactly {0}
        return "v%d" % sid
    return "((%s == 0u) ? v%d : %s)" % (k_var, sid,
                                        _read_back(streams, sid, k_var))
