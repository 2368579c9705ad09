"""AST for the structured requirement language.

A requirement sentence has the shape

    ["if"|"upon" <condition> ","?] <component> "shall"
        ["within" <n> <unit>] "satisfy" <response>

Expressions are untyped at parse time; `typecheck.validate` assigns kinds
(numeric vs boolean) against the variable declarations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

REQ_ID_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")
VAR_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

Pos = tuple[int, int]  # (line, col), 1-based


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Var(Expr):
    name: str
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Num(Expr):
    value: int | float
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Cmp(Expr):
    op: str  # < <= > >= == !=
    lhs: Expr
    rhs: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Arith(Expr):
    op: str  # + - * /
    lhs: Expr
    rhs: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg(Expr):
    """Unary numeric minus."""
    operand: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Not(Expr):
    operand: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class And(Expr):
    lhs: Expr
    rhs: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Or(Expr):
    lhs: Expr
    rhs: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Implies(Expr):
    lhs: Expr
    rhs: Expr
    pos: Pos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Persisted(Expr):
    """True when the operand has held for the previous `bound` steps and now."""
    bound: int
    operand: Expr
    pos: Pos | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("persisted bound must be >= 0")


@dataclass(frozen=True)
class ScopeSpec:
    """Only the null scope (whole trace) is supported."""
    kind: str = "null"


@dataclass(frozen=True)
class TimingSpec:
    """Immediate (no within clause) or Within(n, unit) with n >= 1."""
    kind: str  # "immediate" | "within"
    bound: int = 0
    unit: str = ""

    @classmethod
    def immediate(cls) -> "TimingSpec":
        return cls(kind="immediate")

    @classmethod
    def within(cls, bound: int, unit: str) -> "TimingSpec":
        if bound < 1:
            raise ValueError("Within bound must be >= 1")
        return cls(kind="within", bound=bound, unit=unit)


@dataclass(frozen=True)
class VarDecl:
    name: str
    kind: str  # "numeric" | "boolean"

    def __post_init__(self):
        if not VAR_NAME_RE.match(self.name):
            raise ValueError("invalid variable name: %r" % self.name)
        if self.kind not in ("numeric", "boolean"):
            raise ValueError("variable kind must be numeric or boolean")


@dataclass(frozen=True)
class SourceRequirement:
    id: str
    scope: ScopeSpec
    condition: Expr | None
    component: str
    timing: TimingSpec
    response: Expr
    raw_text: str

    def __post_init__(self):
        if not REQ_ID_RE.match(self.id):
            raise ValueError("invalid requirement id: %r" % self.id)


def walk(e: Expr):
    """Pre-order traversal of an expression tree."""
    yield e
    if isinstance(e, (Cmp, Arith, And, Or, Implies)):
        yield from walk(e.lhs)
        yield from walk(e.rhs)
    elif isinstance(e, (Neg, Not, Persisted)):
        yield from walk(e.operand)


def variables_of(e: Expr) -> list[str]:
    """Variable names in pre-order, first occurrence only."""
    seen: list[str] = []
    for node in walk(e):
        if isinstance(node, Var) and node.name not in seen:
            seen.append(node.name)
    return seen


# Precedence levels used by both the pretty-printer and the parser.
# Higher binds tighter; -> is right-associative, all others left.
_PREC = {"->": 1, "|": 2, "&": 3, "!": 4, "cmp": 5, "+": 6, "-": 6,
         "*": 7, "/": 7, "neg": 8}


def _level(e: Expr) -> int:
    if isinstance(e, Implies):
        return _PREC["->"]
    if isinstance(e, Or):
        return _PREC["|"]
    if isinstance(e, And):
        return _PREC["&"]
    if isinstance(e, Not):
        return _PREC["!"]
    if isinstance(e, Cmp):
        return _PREC["cmp"]
    if isinstance(e, Arith):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    return 99


def format_number(v: int | float) -> str:
    if isinstance(v, bool):  # guard: bool is an int subclass
        raise TypeError("boolean is not a number")
    if isinstance(v, int):
        return str(v)
    return repr(v)


def format_expr(e: Expr, parent_level: int = 0, right_of: str | None = None) -> str:
    """Render an expression with minimal parentheses honoring precedence."""
    mine = _level(e)
    if isinstance(e, Var):
        s = e.name
    elif isinstance(e, Num):
        s = format_number(e.value)
    elif isinstance(e, BoolLit):
        s = "true" if e.value else "false"
    elif isinstance(e, Neg):
        s = "-" + format_expr(e.operand, mine)
    elif isinstance(e, Not):
        s = "! " + format_expr(e.operand, mine)
    elif isinstance(e, Persisted):
        s = "persisted(%d, %s)" % (e.bound, format_expr(e.operand))
        mine = 99
    elif isinstance(e, Cmp):
        # comparisons do not chain: parenthesize comparison operands
        s = "%s %s %s" % (format_expr(e.lhs, mine + 1), e.op,
                          format_expr(e.rhs, mine + 1))
    elif isinstance(e, Arith):
        s = "%s %s %s" % (format_expr(e.lhs, mine), e.op,
                          format_expr(e.rhs, mine + 1))
    elif isinstance(e, And):
        s = "%s & %s" % (format_expr(e.lhs, mine), format_expr(e.rhs, mine + 1))
    elif isinstance(e, Or):
        s = "%s | %s" % (format_expr(e.lhs, mine), format_expr(e.rhs, mine + 1))
    elif isinstance(e, Implies):
        # right-associative: the right child may repeat the level
        s = "%s -> %s" % (format_expr(e.lhs, mine + 1), format_expr(e.rhs, mine))
    else:
        raise TypeError("unknown expression node: %r" % (e,))
    if mine < parent_level:
        return "(" + s + ")"
    return s


def format_requirement(req: SourceRequirement) -> str:
    """Render a requirement back into a parseable sentence."""
    parts = []
    if req.condition is not None:
        parts.append("if %s," % format_expr(req.condition))
    parts.append(req.component)
    parts.append("shall")
    if req.timing.kind == "within":
        parts.append("within %d %s" % (req.timing.bound, req.timing.unit))
    parts.append("satisfy %s" % format_expr(req.response))
    return " ".join(parts)
