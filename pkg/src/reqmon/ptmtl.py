"""Past-time MTL formula AST, temporal depth, and the SMV-style text format.

Formulas are pure past-time by construction: the node set is atoms,
boolean connectives, FTP (first time point), Yesterday, and the bounded
operators Once[a,b], Historically[a,b] and Since[a,b].  All bounds are
finite with lo <= hi.

Text format (fully parenthesized, deterministic):

    (! f)   (f & g)   (f | g)   (f -> g)   FTP   (Y f)
    (H[a,b] f)   (O[a,b] f)   (f S[a,b] g)

Atoms render as a parenthesized comparison / variable / literal, e.g.
"(current_consumption <= cc_t)".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ReqSyntaxError
from .reqast import (Arith, BoolLit, Cmp, Expr, Neg, Num, Var, format_number)


@dataclass(frozen=True)
class MtlFormula:
    pass


@dataclass(frozen=True)
class MAtom(MtlFormula):
    """Boolean-valued leaf: variable, literal, or comparison over arithmetic."""
    expr: Expr


@dataclass(frozen=True)
class MNot(MtlFormula):
    operand: MtlFormula


@dataclass(frozen=True)
class MAnd(MtlFormula):
    lhs: MtlFormula
    rhs: MtlFormula


@dataclass(frozen=True)
class MOr(MtlFormula):
    lhs: MtlFormula
    rhs: MtlFormula


@dataclass(frozen=True)
class MImplies(MtlFormula):
    lhs: MtlFormula
    rhs: MtlFormula


@dataclass(frozen=True)
class MFirst(MtlFormula):
    """True exactly at step 0."""


def _check_bounds(lo: int, hi: int):
    if lo < 0 or hi < 0:
        raise ValueError("interval bounds must be non-negative")
    if lo > hi:
        raise ValueError("interval lower bound exceeds upper bound")


@dataclass(frozen=True)
class MYesterday(MtlFormula):
    operand: MtlFormula


@dataclass(frozen=True)
class MOnce(MtlFormula):
    lo: int
    hi: int
    operand: MtlFormula

    def __post_init__(self):
        _check_bounds(self.lo, self.hi)


@dataclass(frozen=True)
class MHistorically(MtlFormula):
    lo: int
    hi: int
    operand: MtlFormula

    def __post_init__(self):
        _check_bounds(self.lo, self.hi)


@dataclass(frozen=True)
class MSince(MtlFormula):
    """Holds at t iff some t' in [t-hi, t-lo] has rhs at t' and lhs at all
    steps in (t', t]."""
    lo: int
    hi: int
    lhs: MtlFormula
    rhs: MtlFormula

    def __post_init__(self):
        _check_bounds(self.lo, self.hi)


PAST_NODE_TYPES = (MAtom, MNot, MAnd, MOr, MImplies, MFirst, MYesterday,
                   MOnce, MHistorically, MSince)


def subformulas(f: MtlFormula):
    """Pre-order traversal."""
    yield f
    if isinstance(f, (MNot, MYesterday, MOnce, MHistorically)):
        yield from subformulas(f.operand)
    elif isinstance(f, (MAnd, MOr, MImplies, MSince)):
        yield from subformulas(f.lhs)
        yield from subformulas(f.rhs)


def is_pure_past(f: MtlFormula) -> bool:
    """Guards against future-time nodes leaking in through extension."""
    return all(type(g) in PAST_NODE_TYPES for g in subformulas(f))


def formula_variables(f: MtlFormula) -> list[str]:
    """Variable names in pre-order, first occurrence only."""
    from .reqast import variables_of
    seen: list[str] = []
    for g in subformulas(f):
        if isinstance(g, MAtom):
            for name in variables_of(g.expr):
                if name not in seen:
                    seen.append(name)
    return seen


def temporal_depth(f: MtlFormula) -> int:
    """Maximum lookback in steps: eval at t reads samples in [t-depth, t]."""
    if isinstance(f, (MAtom, MFirst)):
        return 0
    if isinstance(f, MNot):
        return temporal_depth(f.operand)
    if isinstance(f, (MAnd, MOr, MImplies)):
        return max(temporal_depth(f.lhs), temporal_depth(f.rhs))
    if isinstance(f, MYesterday):
        return 1 + temporal_depth(f.operand)
    if isinstance(f, (MOnce, MHistorically)):
        return f.hi + temporal_depth(f.operand)
    if isinstance(f, MSince):
        return f.hi + max(temporal_depth(f.lhs), temporal_depth(f.rhs))
    raise TypeError("unknown formula node: %r" % (f,))


# rendering ----------------------------------------------------------------

def _render_atom_expr(e: Expr, parenthesize: bool = False) -> str:
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Num):
        return format_number(e.value)
    if isinstance(e, BoolLit):
        return "true" if e.value else "false"
    if isinstance(e, Neg):
        return "-" + _render_atom_expr(e.operand, parenthesize=True)
    if isinstance(e, (Arith, Cmp)):
        s = "%s %s %s" % (_render_atom_expr(e.lhs, parenthesize=True), e.op,
                          _render_atom_expr(e.rhs, parenthesize=True))
        return "(" + s + ")" if parenthesize else s
    raise TypeError("node not allowed inside an atom: %r" % (e,))


def to_smv_string(f: MtlFormula) -> str:
    """Deterministic, fully parenthesized rendering."""
    if isinstance(f, MAtom):
        return "(" + _render_atom_expr(f.expr) + ")"
    if isinstance(f, MFirst):
        return "FTP"
    if isinstance(f, MNot):
        return "(! %s)" % to_smv_string(f.operand)
    if isinstance(f, MAnd):
        return "(%s & %s)" % (to_smv_string(f.lhs), to_smv_string(f.rhs))
    if isinstance(f, MOr):
        return "(%s | %s)" % (to_smv_string(f.lhs), to_smv_string(f.rhs))
    if isinstance(f, MImplies):
        return "(%s -> %s)" % (to_smv_string(f.lhs), to_smv_string(f.rhs))
    if isinstance(f, MYesterday):
        return "(Y %s)" % to_smv_string(f.operand)
    if isinstance(f, MOnce):
        return "(O[%d,%d] %s)" % (f.lo, f.hi, to_smv_string(f.operand))
    if isinstance(f, MHistorically):
        return "(H[%d,%d] %s)" % (f.lo, f.hi, to_smv_string(f.operand))
    if isinstance(f, MSince):
        return "(%s S[%d,%d] %s)" % (to_smv_string(f.lhs), f.lo, f.hi,
                                     to_smv_string(f.rhs))
    raise TypeError("unknown formula node: %r" % (f,))


# parsing ------------------------------------------------------------------

class _SmvTokens:
    """Tokenizer for the formula text format."""

    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []  # (kind, text, col)
        self._lex()
        self.i = 0

    def _lex(self):
        text = self.text
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch in " \t\r\n":
                i += 1
                continue
            col = i + 1
            matched = False
            for p in ("->", "<=", ">=", "==", "!=", "<", ">", "!", "&", "|",
                      "+", "-", "*", "/", "(", ")", "[", "]", ","):
                if text.startswith(p, i):
                    self.toks.append((p, p, col))
                    i += len(p)
                    matched = True
                    break
            if matched:
                continue
            if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
                j = i
                seen_dot = False
                while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                    if text[j] == ".":
                        seen_dot = True
                    j += 1
                self.toks.append(("number", text[i:j], col))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("word", text[i:j], col))
                i = j
                continue
            raise ReqSyntaxError("unexpected character %r in formula" % ch, 1, col)
        self.toks.append(("eof", "", n + 1))

    @property
    def cur(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def advance(self) -> tuple[str, str, int]:
        t = self.cur
        if t[0] != "eof":
            self.i += 1
        return t

    def expect(self, kind: str):
        t = self.cur
        if t[0] != kind:
            raise ReqSyntaxError("unexpected %r in formula" % (t[1] or "end"),
                                 1, t[2], expected=(kind,))
        return self.advance()


def _parse_bounds(tk: _SmvTokens) -> tuple[int, int]:
    tk.expect("[")
    lo = int(tk.expect("number")[1])
    tk.expect(",")
    hi = int(tk.expect("number")[1])
    tk.expect("]")
    return lo, hi


def _parse_number(text: str) -> int | float:
    return float(text) if "." in text else int(text)


def _parse_arith_operand(tk: _SmvTokens) -> Expr:
    kind, text, col = tk.cur
    if kind == "number":
        tk.advance()
        return Num(_parse_number(text))
    if kind == "word":
        tk.advance()
        return Var(text)
    if kind == "-":
        tk.advance()
        return Neg(_parse_arith_operand(tk))
    if kind == "(":
        tk.advance()
        e = _parse_arith(tk)
        tk.expect(")")
        return e
    raise ReqSyntaxError("unexpected %r in atom" % (text or "end"), 1, col,
                         expected=("number", "variable", "'('", "'-'"))


def _parse_arith(tk: _SmvTokens) -> Expr:
    e = _parse_arith_operand(tk)
    while tk.cur[0] in ("+", "-", "*", "/"):
        op = tk.advance()[0]
        e = Arith(op, e, _parse_arith_operand(tk))
    return e


def _parse_formula(tk: _SmvTokens) -> MtlFormula:
    kind, text, col = tk.cur
    if kind == "word" and text == "FTP":
        tk.advance()
        return MFirst()
    if kind != "(":
        raise ReqSyntaxError("unexpected %r in formula" % (text or "end"),
                             1, col, expected=("'('", "FTP"))
    tk.advance()
    f = _parse_paren_body(tk)
    tk.expect(")")
    return f


def _parse_paren_body(tk: _SmvTokens) -> MtlFormula:
    kind, text, _ = tk.cur
    if kind == "!":
        tk.advance()
        return MNot(_parse_formula(tk))
    if kind == "word" and text == "Y":
        tk.advance()
        return MYesterday(_parse_formula(tk))
    if kind == "word" and text == "H":
        tk.advance()
        lo, hi = _parse_bounds(tk)
        return MHistorically(lo, hi, _parse_formula(tk))
    if kind == "word" and text == "O":
        tk.advance()
        lo, hi = _parse_bounds(tk)
        return MOnce(lo, hi, _parse_formula(tk))

    # boolean literals / bare variables / arithmetic comparisons;
    # or the left operand of a binary connective / Since
    lhs = _parse_operand(tk)
    kind, text, col = tk.cur
    if kind == ")":
        return _as_formula(lhs, col)
    if kind in ("&", "|", "->"):
        tk.advance()
        rhs = _parse_formula(tk)
        node = {"&": MAnd, "|": MOr, "->": MImplies}[kind]
        return node(_as_formula(lhs, col), rhs)
    if kind == "word" and text == "S":
        tk.advance()
        lo, hi = _parse_bounds(tk)
        rhs = _parse_formula(tk)
        return MSince(lo, hi, _as_formula(lhs, col), rhs)
    if kind in ("<", "<=", ">", ">=", "==", "!="):
        tk.advance()
        rhs = _parse_arith(tk)
        return MAtom(Cmp(kind, _as_expr(lhs, col), rhs))
    raise ReqSyntaxError("unexpected %r in formula" % (text or "end"), 1, col,
                         expected=("connective", "comparison", "')'"))


def _parse_operand(tk: _SmvTokens):
    """Either a sub-formula (parenthesized or FTP) or an arithmetic operand.

    Plain words become variables; 'true'/'false' become literals. A '('
    could open either a sub-formula or a parenthesized arithmetic
    expression, so both are tried.
    """
    kind, text, col = tk.cur
    if kind == "word" and text == "FTP":
        tk.advance()
        return MFirst()
    if kind == "word" and text in ("true", "false"):
        tk.advance()
        return BoolLit(text == "true")
    if kind == "word":
        tk.advance()
        e: Expr = Var(text)
        if tk.cur[0] in ("+", "-", "*", "/"):
            while tk.cur[0] in ("+", "-", "*", "/"):
                op = tk.advance()[0]
                e = Arith(op, e, _parse_arith_operand(tk))
        return e
    if kind in ("number", "-"):
        return _parse_arith(tk)
    if kind == "(":
        # try formula first; rewind to arithmetic on failure
        mark = tk.i
        try:
            return _parse_formula(tk)
        except ReqSyntaxError:
            tk.i = mark
            return _parse_arith(tk)
    raise ReqSyntaxError("unexpected %r in formula" % (text or "end"), 1, col)


def _as_formula(operand, col: int) -> MtlFormula:
    if isinstance(operand, MtlFormula):
        return operand
    if isinstance(operand, (Var, BoolLit)):
        return MAtom(operand)
    raise ReqSyntaxError("numeric expression used as a formula", 1, col)


def _as_expr(operand, col: int) -> Expr:
    if isinstance(operand, Expr):
        return operand
    if isinstance(operand, MAtom):
        return operand.expr
    raise ReqSyntaxError("formula used as a comparison operand", 1, col)


def from_smv_string(text: str) -> MtlFormula:
    """Parse the text format produced by to_smv_string."""
    tk = _SmvTokens(text)
    f = _parse_formula(tk)
    kind, tok_text, col = tk.cur
    if kind != "eof":
        raise ReqSyntaxError("unexpected %r after formula" % tok_text, 1, col)
    return f
