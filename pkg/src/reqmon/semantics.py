"""Reference semantics for past-time MTL over finite traces.

This is the oracle the online monitor (and the generated C) is tested
against.  `eval_at` is the literal quantifier-expansion definition;
`eval_trace` computes the same values bottom-up in one pass per subformula
so whole-trace checks stay affordable on long traces.

Window semantics (0-based steps, evaluated at step t):

    FTP                true iff t == 0
    Y f                true iff t > 0 and f at t-1
    O[a,b] f           true iff some t' in [t-b, t-a] with t' >= 0 has f
    H[a,b] f           true iff t >= b and f at every t' in [t-b, t-a]
                       (an incomplete window is false: persistence needs
                       the full n+1 samples)
    f S[a,b] g         true iff some t' in [t-b, t-a] with t' >= 0 has g
                       at t' and f at every step in (t', t]

Numeric samples are doubles; comparisons are exact, no epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnknownVariableError
from .ptmtl import (MAnd, MAtom, MFirst, MHistorically, MImplies, MNot, MOnce,
                    MOr, MSince, MtlFormula, MYesterday, subformulas)
from .reqast import (And, Arith, BoolLit, Cmp, Expr, Implies, Neg, Not, Num,
                     Or, Persisted, Var)

Sample = float | bool


@dataclass(frozen=True)
class Trace:
    """Per-variable sample sequences of equal length; 0-based steps."""

    values: dict[str, list[Sample]]

    def __post_init__(self):
        lengths = {len(seq) for seq in self.values.values()}
        if len(lengths) > 1:
            raise ValueError("variable sequences differ in length: %s" %
                             sorted(lengths))

    @property
    def length(self) -> int:
        for seq in self.values.values():
            return len(seq)
        return 0

    def sample(self, name: str, t: int) -> Sample:
        try:
            seq = self.values[name]
        except KeyError:
            raise UnknownVariableError("variable '%s' not in trace" % name) from None
        return seq[t]


def eval_expr(e: Expr, env) -> Sample:
    """Evaluate a requirement expression against `env` (name -> sample).

    `env` may be a dict or a callable name -> value.
    """
    lookup = env if callable(env) else env.__getitem__
    return _eval_expr(e, lookup)


def _eval_expr(e: Expr, lookup) -> Sample:
    if isinstance(e, Var):
        try:
            return lookup(e.name)
        except KeyError:
            raise UnknownVariableError("variable '%s' has no value" % e.name) from None
    if isinstance(e, Num):
        return float(e.value)
    if isinstance(e, BoolLit):
        return e.value
    if isinstance(e, Neg):
        return -_eval_expr(e.operand, lookup)
    if isinstance(e, Arith):
        a = _eval_expr(e.lhs, lookup)
        b = _eval_expr(e.rhs, lookup)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0:  # IEEE semantics, matching the generated C
            if a == 0:
                return math.nan
            return math.copysign(math.inf, a) * math.copysign(1.0, b)
        return a / b
    if isinstance(e, Cmp):
        a = _eval_expr(e.lhs, lookup)
        b = _eval_expr(e.rhs, lookup)
        return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b,
                "==": a == b, "!=": a != b}[e.op]
    if isinstance(e, Not):
        return not _eval_expr(e.operand, lookup)
    if isinstance(e, And):
        return bool(_eval_expr(e.lhs, lookup)) and bool(_eval_expr(e.rhs, lookup))
    if isinstance(e, Or):
        return bool(_eval_expr(e.lhs, lookup)) or bool(_eval_expr(e.rhs, lookup))
    if isinstance(e, Implies):
        return (not _eval_expr(e.lhs, lookup)) or bool(_eval_expr(e.rhs, lookup))
    if isinstance(e, Persisted):
        raise TypeError("persisted must be desugared before evaluation")
    raise TypeError("unknown expression node: %r" % (e,))


def eval_at(f: MtlFormula, tr: Trace, t: int) -> bool:
    """Literal definition, evaluated recursively at one step."""
    if t < 0 or t >= tr.length:
        raise IndexError("step %d outside trace of length %d" % (t, tr.length))
    if isinstance(f, MAtom):
        return bool(eval_expr(f.expr, lambda name: tr.sample(name, t)))
    if isinstance(f, MFirst):
        return t == 0
    if isinstance(f, MNot):
        return not eval_at(f.operand, tr, t)
    if isinstance(f, MAnd):
        return eval_at(f.lhs, tr, t) and eval_at(f.rhs, tr, t)
    if isinstance(f, MOr):
        return eval_at(f.lhs, tr, t) or eval_at(f.rhs, tr, t)
    if isinstance(f, MImplies):
        return (not eval_at(f.lhs, tr, t)) or eval_at(f.rhs, tr, t)
    if isinstance(f, MYesterday):
        return t > 0 and eval_at(f.operand, tr, t - 1)
    if isinstance(f, MOnce):
        return any(eval_at(f.operand, tr, u)
                   for u in range(max(0, t - f.hi), t - f.lo + 1))
    if isinstance(f, MHistorically):
        if t < f.hi:
            return False
        return all(eval_at(f.operand, tr, u)
                   for u in range(t - f.hi, t - f.lo + 1))
    if isinstance(f, MSince):
        for u in range(max(0, t - f.hi), t - f.lo + 1):
            if eval_at(f.rhs, tr, u) and all(eval_at(f.lhs, tr, v)
                                             for v in range(u + 1, t + 1)):
                return True
        return False
    raise TypeError("unknown formula node: %r" % (f,))


def eval_trace(f: MtlFormula, tr: Trace) -> list[bool]:
    """Pointwise truth values of f over the whole trace.

    Agrees with eval_at at every step (property-tested); computed
    bottom-up per subformula so the cost is linear in trace length per
    node instead of exponential in nesting depth.
    """
    n = tr.length
    memo: dict[int, list[bool]] = {}

    def seq(g: MtlFormula) -> list[bool]:
        key = id(g)
        if key in memo:
            return memo[key]
        if isinstance(g, MAtom):
            out = [bool(eval_expr(g.expr, lambda name, _t=t: tr.sample(name, _t)))
                   for t in range(n)]
        elif isinstance(g, MFirst):
            out = [t == 0 for t in range(n)]
        elif isinstance(g, MNot):
            a = seq(g.operand)
            out = [not v for v in a]
        elif isinstance(g, MAnd):
            a, b = seq(g.lhs), seq(g.rhs)
            out = [x and y for x, y in zip(a, b)]
        elif isinstance(g, MOr):
            a, b = seq(g.lhs), seq(g.rhs)
            out = [x or y for x, y in zip(a, b)]
        elif isinstance(g, MImplies):
            a, b = seq(g.lhs), seq(g.rhs)
            out = [(not x) or y for x, y in zip(a, b)]
        elif isinstance(g, MYesterday):
            a = seq(g.operand)
            out = [t > 0 and a[t - 1] for t in range(n)]
        elif isinstance(g, MOnce):
            a = seq(g.operand)
            out = [any(a[max(0, t - g.hi):max(0, t - g.lo + 1)])
                   for t in range(n)]
        elif isinstance(g, MHistorically):
            a = seq(g.operand)
            out = [t >= g.hi and all(a[t - g.hi:t - g.lo + 1])
                   for t in range(n)]
        elif isinstance(g, MSince):
            phi, psi = seq(g.lhs), seq(g.rhs)
            out = []
            for t in range(n):
                hit = False
                for u in range(max(0, t - g.hi), t - g.lo + 1):
                    if psi[u] and all(phi[u + 1:t + 1]):
                        hit = True
                        break
                out.append(hit)
        else:
            raise TypeError("unknown formula node: %r" % (g,))
        memo[key] = out
        return out

    return seq(f)


def false_steps(f: MtlFormula, tr: Trace) -> list[int]:
    """Steps where the formula is false, i.e. the violation points."""
    return [t for t, v in enumerate(eval_trace(f, tr)) if not v]
