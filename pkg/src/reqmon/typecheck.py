"""Kind checking of requirement expressions against variable declarations."""

from __future__ import annotations

from dataclasses import dataclass

from .reqast import (And, Arith, BoolLit, Cmp, Expr, Implies, Neg, Not, Num,
                     Or, Persisted, SourceRequirement, Var, VarDecl)

NUMERIC = "numeric"
BOOLEAN = "boolean"
_UNKNOWN = "unknown"  # after an undeclared-variable error; suppresses cascades


@dataclass(frozen=True)
class TypeIssue:
    code: str  # "undeclared-variable" | "kind-mismatch"
    message: str
    name: str | None = None

    def __str__(self) -> str:
        return self.message


class _Checker:
    def __init__(self, decls: list[VarDecl]):
        self.kinds = {d.name: d.kind for d in decls}
        self.issues: list[TypeIssue] = []
        self._reported_undeclared: set[str] = set()

    def undeclared(self, name: str):
        if name not in self._reported_undeclared:
            self._reported_undeclared.add(name)
            self.issues.append(TypeIssue(
                "undeclared-variable",
                "undeclared variable '%s'" % name, name))

    def mismatch(self, message: str):
        self.issues.append(TypeIssue("kind-mismatch", message))

    def require(self, e: Expr, wanted: str, context: str) -> None:
        got = self.kind_of(e)
        if got not in (_UNKNOWN, wanted):
            self.mismatch("%s must be %s" % (context, wanted))

    def kind_of(self, e: Expr) -> str:
        if isinstance(e, Var):
            kind = self.kinds.get(e.name)
            if kind is None:
                self.undeclared(e.name)
                return _UNKNOWN
            return kind
        if isinstance(e, Num):
            return NUMERIC
        if isinstance(e, BoolLit):
            return BOOLEAN
        if isinstance(e, Neg):
            self.require(e.operand, NUMERIC, "operand of unary '-'")
            return NUMERIC
        if isinstance(e, Arith):
            self.require(e.lhs, NUMERIC, "operand of '%s'" % e.op)
            self.require(e.rhs, NUMERIC, "operand of '%s'" % e.op)
            return NUMERIC
        if isinstance(e, Cmp):
            self.require(e.lhs, NUMERIC, "operand of '%s'" % e.op)
            self.require(e.rhs, NUMERIC, "operand of '%s'" % e.op)
            return BOOLEAN
        if isinstance(e, Not):
            self.require(e.operand, BOOLEAN, "operand of '!'")
            return BOOLEAN
        if isinstance(e, (And, Or, Implies)):
            op = {"And": "&", "Or": "|", "Implies": "->"}[type(e).__name__]
            self.require(e.lhs, BOOLEAN, "operand of '%s'" % op)
            self.require(e.rhs, BOOLEAN, "operand of '%s'" % op)
            return BOOLEAN
        if isinstance(e, Persisted):
            self.require(e.operand, BOOLEAN, "operand of persisted")
            return BOOLEAN
        raise TypeError("unknown expression node: %r" % (e,))


def validate(req: SourceRequirement, decls: list[VarDecl]) -> list[TypeIssue]:
    """Check variable usage; returns issues in pre-order walk order."""
    checker = _Checker(decls)
    if req.condition is not None:
        got = checker.kind_of(req.condition)
        if got not in (_UNKNOWN, BOOLEAN):
            checker.mismatch("condition must be boolean")
    got = checker.kind_of(req.response)
    if got not in (_UNKNOWN, BOOLEAN):
        checker.mismatch("response must be boolean")
    return checker.issues
