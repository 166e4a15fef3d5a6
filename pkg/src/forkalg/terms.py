"""Modal terms over ``0 1 + . - f fd`` with a small infix parser.

Grammar (``f`` and ``fd`` are prefix operators, parentheses optional)::

    equation := expr (("<=" | "=") expr)?
    expr     := product ("+" product)*
    product  := unary ("." unary)*
    unary    := "-" unary | "f" unary | "fd" unary | atom
    atom     := "0" | "1" | NAME | "(" expr ")"

An inequality ``s <= t`` is read as the term ``-s + t`` and ``s = t`` as
``(-s + t) . (-t + s)``; both hold exactly when the term evaluates to 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .algebra import ClosureAlgebra, Element
from .errors import ParseError, UnboundVariable


class Term:
    def __add__(self, other: Term) -> Term:
        return Join(self, other)

    def __mul__(self, other: Term) -> Term:
        return Meet(self, other)

    def __neg__(self) -> Term:
        return Neg(self)

    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        _collect(self, seen)
        return list(seen)

    def eval(self, a: ClosureAlgebra, env: Mapping[str, Element]) -> Element:
        return evaluate(self, a, env)


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const(Term):
    value: int  # 0 or 1

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class Meet(Term):
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"({self.left} . {self.right})"


@dataclass(frozen=True)
class Neg(Term):
    arg: Term

    def __str__(self) -> str:
        return f"-{self.arg}"


@dataclass(frozen=True)
class Clo(Term):
    arg: Term

    def __str__(self) -> str:
        return f"f({self.arg})"


@dataclass(frozen=True)
class Int(Term):
    arg: Term

    def __str__(self) -> str:
        return f"fd({self.arg})"


ZERO = Const(0)
ONE = Const(1)


def f(t: Term) -> Term:
    return Clo(t)


def fd(t: Term) -> Term:
    return Int(t)


def leq(s: Term, t: Term) -> Term:
    return Join(Neg(s), t)


def equal(s: Term, t: Term) -> Term:
    return Meet(leq(s, t), leq(t, s))


def _collect(t: Term, seen: dict[str, None]) -> None:
    if isinstance(t, Var):
        seen.setdefault(t.name)
    elif isinstance(t, (Join, Meet)):
        _collect(t.left, seen)
        _collect(t.right, seen)
    elif isinstance(t, (Neg, Clo, Int)):
        _collect(t.arg, seen)


def evaluate(t: Term, a: ClosureAlgebra, env: Mapping[str, Element]) -> Element:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(f"no value for variable {t.name!r}") from None
    if isinstance(t, Const):
        return a.top if t.value else 0
    if isinstance(t, Join):
        return evaluate(t.left, a, env) | evaluate(t.right, a, env)
    if isinstance(t, Meet):
        return evaluate(t.left, a, env) & evaluate(t.right, a, env)
    if isinstance(t, Neg):
        return a.complement(evaluate(t.arg, a, env))
    if isinstance(t, Clo):
        return a.closure(evaluate(t.arg, a, env))
    if isinstance(t, Int):
        return a.interior(evaluate(t.arg, a, env))
    raise TypeError(f"not a term: {t!r}")


# parsing ----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<=|=|\+|\.|-|\(|\))|([A-Za-z_][A-Za-z_0-9']*|[01]))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", 1, col)
        tok = m.group(1) or m.group(2)
        tokens.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def column(self) -> int:
        if self.i < len(self.tokens):
            return self.tokens[self.i][1] + 1
        return len(self.text) + 1

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = f"{expected!r}" if expected else "a term"
            raise ParseError(f"expected {want}", 1, self.column())
        self.i += 1
        return tok

    def equation(self) -> Term:
        lhs = self.expr()
        op = self.peek()
        if op in ("<=", "="):
            self.take()
            rhs = self.expr()
            lhs = leq(lhs, rhs) if op == "<=" else equal(lhs, rhs)
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()!r}", 1, self.column())
        return lhs

    def expr(self) -> Term:
        t = self.product()
        while self.peek() == "+":
            self.take()
            t = Join(t, self.product())
        return t

    def product(self) -> Term:
        t = self.unary()
        while self.peek() == ".":
            self.take()
            t = Meet(t, self.unary())
        return t

    def unary(self) -> Term:
        tok = self.peek()
        if tok == "-":
            self.take()
            return Neg(self.unary())
        if tok == "f":
            self.take()
            return Clo(self.unary())
        if tok == "fd":
            self.take()
            return Int(self.unary())
        return self.atom()

    def atom(self) -> Term:
        tok = self.peek()
        if tok == "(":
            self.take()
            t = self.expr()
            self.take(")")
            return t
        if tok in ("0", "1"):
            self.take()
            return Const(int(tok))
        if tok is not None and (tok[0].isalpha() or tok[0] == "_"):
            self.take()
            return Var(tok)
        raise ParseError("expected a term", 1, self.column())


def parse_term(text: str) -> Term:
    """Parse a term or an (in)equation; see the module docstring for syntax."""
    return _Parser(text).equation()
