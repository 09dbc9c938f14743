"""Reader for the definite-clause subset of Prolog.

Lowercase identifiers are functors and predicates, uppercase or ``_``-initial
identifiers are variables, and bare integers are constants. Clauses are
labelled ``ℓ1``, ``ℓ2``, ... in source order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Literal

from .terms import Atom, Clause, Program, Struct, Term, Var

ErrorKind = Literal["syntax", "unsupported-construct", "duplicate-label"]

LABEL_PREFIX = "ℓ"


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, span: SourceSpan, message: str, kind: ErrorKind = "syntax"):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.message = message
        self.kind = kind


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<neck>:-)
  | (?P<naf>\\\+)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<punct>[(),.])
  | (?P<special>[;!|\[\]{}])
  | (?P<quoted>'[^'\n]*'?|"[^"\n]*"?)
  | (?P<op>[-+*/\\^<>=~:?@#&$]+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        span = SourceSpan(line, pos - line_start + 1, 1)
        if m is None:
            raise ParseError(span, f"unexpected character {text[pos]!r}")
        kind, value = m.lastgroup, m.group()
        span = SourceSpan(line, pos - line_start + 1, len(value))
        if kind not in ("ws", "comment"):
            if kind == "naf":
                raise ParseError(span, "negation (\\+) is not part of definite programs",
                                 "unsupported-construct")
            if kind == "special" and value in ";!":
                what = "disjunction (;)" if value == ";" else "cut (!)"
                raise ParseError(span, f"{what} is not supported", "unsupported-construct")
            if kind == "quoted":
                raise ParseError(span, "quoted atoms and strings are not supported",
                                 "unsupported-construct")
            toks.append(_Tok(kind, value, span))
        nl = value.count("\n")
        if nl:
            line += nl
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", SourceSpan(line, pos - line_start + 1, 0)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.anon = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.tok
        if t.text != text or t.kind not in ("punct", "neck"):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message: str, kind: ErrorKind = "syntax"):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(t.span, f"{message}, found {found}", kind)

    def term(self) -> Term:
        t = self.tok
        if t.kind == "var":
            self.advance()
            if t.text == "_":
                self.anon += 1
                return Var("_", -self.anon)
            return Var(t.text)
        if t.kind == "int":
            self.advance()
            return Struct(t.text)
        if t.kind == "name":
            self.advance()
            return Struct(t.text, self.args())
        self.fail("expected a term")

    def args(self) -> tuple[Term, ...]:
        if self.tok.text != "(":
            return ()
        self.advance()
        out = [self.term()]
        while self.tok.text == ",":
            self.advance()
            out.append(self.term())
        self.expect(")")
        return tuple(out)

    def atom(self, where: str) -> Atom:
        t = self.tok
        if t.kind == "var":
            self.fail(f"a variable cannot be used as {where}", "unsupported-construct")
        if t.kind != "name":
            self.fail(f"expected an atom as {where}")
        self.advance()
        a = Atom(t.text, self.args())
        nxt = self.tok
        if nxt.kind == "name" and nxt.text == "is":
            raise ParseError(nxt.span, "arithmetic (is) is not supported", "unsupported-construct")
        if nxt.kind == "op":
            raise ParseError(nxt.span, f"operator {nxt.text!r} is not supported")
        return a

    def clause(self, label: str) -> Clause:
        head = self.atom("a clause head")
        body = []
        if self.tok.kind == "neck":
            self.advance()
            body.append(self.atom("a body goal"))
            while self.tok.text == ",":
                self.advance()
                body.append(self.atom("a body goal"))
        self.expect(".")
        # `true` is the empty conjunction
        body = [b for b in body if b != Atom("true")]
        return Clause(label, head, tuple(body))

    def program(self) -> Program:
        out = []
        while self.tok.kind != "eof":
            out.append(self.clause(f"{LABEL_PREFIX}{len(out) + 1}"))
        return Program(tuple(out))


def parse_program(text: str) -> Program:
    return _Parser(text).program()


def parse_atom(text: str) -> Atom:
    """Parse a single atomic goal; a trailing period is optional."""
    p = _Parser(text)
    a = p.atom("a goal")
    if p.tok.text == ".":
        p.advance()
    if p.tok.kind != "eof":
        p.fail("expected end of goal")
    return a


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        p.fail("expected end of term")
    return t
