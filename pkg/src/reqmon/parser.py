"""Recursive-descent parser for requirement sentences and their input files.

Connective precedence (tightest first): ! > & > | > ->, with ->
right-associative.  `if` and `upon` both introduce the condition.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MissingFieldError, ReqSyntaxError
from .reqast import (And, Arith, BoolLit, Cmp, Expr, Implies, Neg, Not, Num,
                     Or, Persisted, ScopeSpec, SourceRequirement, TimingSpec,
                     Var, VarDecl, REQ_ID_RE)

KEYWORDS = {"if", "upon", "shall", "within", "satisfy", "persisted",
            "true", "false"}

_PUNCT = ("->", "<=", ">=", "==", "!=", "<", ">", "!", "&", "|",
          "+", "-", "*", "/", "(", ")", ",")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "number" | "kw:<word>" | punctuation | "eof"
    text: str
    line: int
    col: int
    value: int | float | None = None


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            lit = text[i:j]
            value: int | float = float(lit) if seen_dot else int(lit)
            toks.append(Token("number", lit, line, col, value))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "kw:" + word if word in KEYWORDS else "ident"
            toks.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                toks.append(Token(p, p, line, col))
                col += len(p)
                i += len(p)
                break
        else:
            raise ReqSyntaxError("unexpected character %r" % ch, line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.cur
        if t.kind != "eof":
            self.i += 1
        return t

    def accept(self, kind: str) -> Token | None:
        if self.cur.kind == kind:
            return self.advance()
        return None

    def expect(self, kind: str, what: str) -> Token:
        t = self.cur
        if t.kind != kind:
            raise ReqSyntaxError("unexpected %s" % _describe(t), t.line, t.col,
                                 expected=(what,))
        return self.advance()

    def fail(self, expected: tuple[str, ...]):
        t = self.cur
        raise ReqSyntaxError("unexpected %s" % _describe(t), t.line, t.col,
                             expected=expected)

    # expression grammar -------------------------------------------------

    def parse_expr(self) -> Expr:
        return self.parse_implies()

    def parse_implies(self) -> Expr:
        lhs = self.parse_or()
        t = self.accept("->")
        if t:
            rhs = self.parse_implies()
            return Implies(lhs, rhs, pos=(t.line, t.col))
        return lhs

    def parse_or(self) -> Expr:
        e = self.parse_and()
        while True:
            t = self.accept("|")
            if not t:
                return e
            e = Or(e, self.parse_and(), pos=(t.line, t.col))

    def parse_and(self) -> Expr:
        e = self.parse_unary()
        while True:
            t = self.accept("&")
            if not t:
                return e
            e = And(e, self.parse_unary(), pos=(t.line, t.col))

    def parse_unary(self) -> Expr:
        t = self.accept("!")
        if t:
            return Not(self.parse_unary(), pos=(t.line, t.col))
        return self.parse_relation()

    def parse_relation(self) -> Expr:
        lhs = self.parse_sum()
        for op in ("<=", ">=", "==", "!=", "<", ">"):
            t = self.accept(op)
            if t:
                rhs = self.parse_sum()
                return Cmp(op, lhs, rhs, pos=(t.line, t.col))
        return lhs

    def parse_sum(self) -> Expr:
        e = self.parse_term()
        while self.cur.kind in ("+", "-"):
            t = self.advance()
            e = Arith(t.kind, e, self.parse_term(), pos=(t.line, t.col))
        return e

    def parse_term(self) -> Expr:
        e = self.parse_factor()
        while self.cur.kind in ("*", "/"):
            t = self.advance()
            e = Arith(t.kind, e, self.parse_factor(), pos=(t.line, t.col))
        return e

    def parse_factor(self) -> Expr:
        t = self.cur
        if t.kind == "number":
            self.advance()
            return Num(t.value, pos=(t.line, t.col))
        if t.kind == "ident":
            self.advance()
            return Var(t.text, pos=(t.line, t.col))
        if t.kind == "kw:true":
            self.advance()
            return BoolLit(True, pos=(t.line, t.col))
        if t.kind == "kw:false":
            self.advance()
            return BoolLit(False, pos=(t.line, t.col))
        if t.kind == "kw:persisted":
            self.advance()
            self.expect("(", "'('")
            bound_tok = self.cur
            if bound_tok.kind != "number" or not isinstance(bound_tok.value, int):
                self.fail(("non-negative integer bound",))
            self.advance()
            self.expect(",", "','")
            operand = self.parse_expr()
            self.expect(")", "')'")
            return Persisted(bound_tok.value, operand,
                             pos=(t.line, t.col))
        if t.kind == "-":
            self.advance()
            return Neg(self.parse_factor(), pos=(t.line, t.col))
        if t.kind == "(":
            self.advance()
            e = self.parse_expr()
            self.expect(")", "')'")
            return e
        self.fail(("variable", "number", "'true'", "'false'",
                   "'persisted'", "'('", "'-'", "'!'"))

    # sentence grammar ---------------------------------------------------

    def parse_requirement(self, req_id: str, raw_text: str) -> SourceRequirement:
        condition: Expr | None = None
        if self.cur.kind in ("kw:if", "kw:upon"):
            self.advance()
            condition = self.parse_expr()
            self.accept(",")

        t = self.cur
        if t.kind != "ident":
            raise MissingFieldError("component", t.line, t.col,
                                    expected=("component name",))
        component = self.advance().text

        t = self.cur
        if t.kind != "kw:shall":
            raise MissingFieldError("shall", t.line, t.col, expected=("'shall'",))
        self.advance()

        timing = TimingSpec.immediate()
        t = self.accept("kw:within")
        if t:
            bound_tok = self.cur
            if bound_tok.kind != "number" or not isinstance(bound_tok.value, int):
                self.fail(("positive integer bound",))
            if bound_tok.value < 1:
                raise ReqSyntaxError("Within bound must be >= 1",
                                     bound_tok.line, bound_tok.col)
            self.advance()
            unit_tok = self.cur
            if unit_tok.kind != "ident":
                self.fail(("time unit",))
            self.advance()
            timing = TimingSpec.within(bound_tok.value, unit_tok.text)

        t = self.cur
        if t.kind != "kw:satisfy":
            raise MissingFieldError("response", t.line, t.col,
                                    expected=("'satisfy'",))
        self.advance()
        if self.cur.kind == "eof":
            t = self.cur
            raise MissingFieldError("response", t.line, t.col,
                                    expected=("boolean expression",))
        response = self.parse_expr()

        t = self.cur
        if t.kind != "eof":
            raise ReqSyntaxError("unexpected %s after response" % _describe(t),
                                 t.line, t.col, expected=("end of requirement",))

        return SourceRequirement(id=req_id, scope=ScopeSpec(),
                                 condition=condition, component=component,
                                 timing=timing, response=response,
                                 raw_text=raw_text)


def _describe(t: Token) -> str:
    if t.kind == "eof":
        return "end of input"
    if t.kind == "ident":
        return "identifier '%s'" % t.text
    if t.kind == "number":
        return "number '%s'" % t.text
    return "'%s'" % t.text


def parse_requirement(text: str, req_id: str) -> SourceRequirement:
    """Parse one requirement sentence. Raises ReqSyntaxError on bad input."""
    if not REQ_ID_RE.match(req_id):
        raise ReqSyntaxError("invalid requirement id %r" % req_id, 1, 1)
    toks = tokenize(text)
    return _Parser(toks).parse_requirement(req_id, text)


def parse_expression(text: str) -> Expr:
    """Parse a bare expression (used by tests and the explain command)."""
    p = _Parser(tokenize(text))
    e = p.parse_expr()
    t = p.cur
    if t.kind != "eof":
        raise ReqSyntaxError("unexpected %s" % _describe(t), t.line, t.col,
                             expected=("end of expression",))
    return e


def load_requirements_text(text: str) -> list[tuple[str, str, int]]:
    """Split a requirements file into (id, sentence, first_line) blocks.

    Blocks start at a `# id: <ID>` header line; subsequent non-comment,
    non-blank lines up to the next header belong to the sentence. Other
    `#` lines are comments.
    """
    blocks: list[tuple[str, list[str], int]] = []
    current: tuple[str, list[str], int] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("id:"):
                req_id = body[3:].strip()
                if not REQ_ID_RE.match(req_id):
                    raise ReqSyntaxError("invalid requirement id %r" % req_id,
                                         lineno, 1)
                if current is not None:
                    blocks.append(current)
                current = (req_id, [], lineno)
            continue
        if not line:
            continue
        if current is None:
            raise ReqSyntaxError("requirement text before any '# id:' header",
                                 lineno, 1)
        current[1].append(line)
    if current is not None:
        blocks.append(current)

    out: list[tuple[str, str, int]] = []
    seen: set[str] = set()
    for req_id, lines, lineno in blocks:
        if req_id in seen:
            raise ReqSyntaxError("duplicate requirement id %r" % req_id,
                                 lineno, 1)
        seen.add(req_id)
        if not lines:
            raise ReqSyntaxError("requirement %r has no sentence" % req_id,
                                 lineno, 1)
        out.append((req_id, " ".join(lines), lineno))
    return out


def load_requirements_file(path) -> list[SourceRequirement]:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return [parse_requirement(sentence, req_id)
            for req_id, sentence, _ in load_requirements_text(text)]


def load_var_decls_text(text: str) -> list[VarDecl]:
    """Parse declarations, one `name : numeric|boolean` per line."""
    decls: list[VarDecl] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ReqSyntaxError("expected 'name : numeric|boolean'", lineno, 1)
        name, _, kind = line.partition(":")
        name = name.strip()
        kind = kind.strip()
        if kind not in ("numeric", "boolean"):
            raise ReqSyntaxError("unknown kind %r" % kind, lineno, 1)
        try:
            decl = VarDecl(name, kind)
        except ValueError as exc:
            raise ReqSyntaxError(str(exc), lineno, 1) from None
        if name in seen:
            raise ReqSyntaxError("duplicate variable %r" % name, lineno, 1)
        seen.add(name)
        decls.append(decl)
    return decls


def load_var_decls_file(path) -> list[VarDecl]:
    with open(path, "r", encoding="utf-8") as fh:
        return load_var_decls_text(fh.read())
