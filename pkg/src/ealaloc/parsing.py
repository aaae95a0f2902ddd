"""Recursive-descent parser for module vectors and algebra words.

One grammar serves both::

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := NUMBER | symbol power? | '(' expr ')' power?
            | 'x' '[' int ',' int ']' power?
            | gen '(' int ',' int ')' power? | ('D1'|'D2') power?
    power  := '^' int            (int nonzero)
    symbol := 'q' | 'mu' | 'b'
    gen    := 'E11' | 'E12' | 'E21' | 'E22'

Whether ``x[..]`` atoms or generator atoms are legal is decided by the
entry point (:func:`parse_vector` or :func:`parse_word`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from .algebra import INV, AlgElement, Atom
from .fock import GridIndex, ModuleSpace, Monomial, MVector, validate_in
from .scalar import RATIONALS, SYMBOL_NAMES, SYMBOLIC, ParamEnv

__all__ = ["ParseError", "parse_vector", "parse_word", "parse_index"]


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0, expected: set[str] | None = None):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.column = line, col
        self.expected = sorted(expected or ())
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at line {line}, column {col}{detail}")


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>E1[12]|E2[12]|D[12]|mu|q|b|x)|(?P<op>[-+*/^()\[\],]))"
)


@dataclass
class _Tok:
    kind: str  # num, name, op, end
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = mt.lastgroup
        toks.append(_Tok(kind, mt.group(kind), mt.start(kind)))
        pos = mt.end()
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    """Produces ``{(x-monomial, word): coefficient}``; x atoms commute, words do not."""

    def __init__(self, text: str, field, symbols: dict[str, Any], m: GridIndex | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field
        self.symbols = symbols
        self.m = m

    # token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, expected: set[str] | None = None, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(msg, self.text, tok.pos, expected)

    def accept(self, value: str) -> bool:
        if self.tok.kind in ("op", "name") and self.tok.value == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.accept(value):
            got = self.tok.value or "end of input"
            self.error(f"unexpected {got!r}", {repr(value)})

    def integer(self) -> int:
        sign = -1 if self.accept("-") else 1
        if self.tok.kind != "num":
            self.error("expected an integer", {"integer"})
        val = int(self.tok.value)
        self.i += 1
        return sign * val

    def power(self) -> int:
        if not self.accept("^"):
            return 1
        tok = self.tok
        k = self.integer()
        if k == 0:
            self.error("zero exponent is not allowed", {"nonzero integer"}, tok)
        return k

    # grammar
    def parse(self) -> dict:
        terms = self.expr()
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.value!r}", {"'+'", "'-'", "'*'", "'/'", "end of input"})
        return terms

    def expr(self) -> dict:
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        out: dict = {}
        self._add(out, self.term(), sign)
        while True:
            if self.accept("+"):
                self._add(out, self.term(), 1)
            elif self.accept("-"):
                self._add(out, self.term(), -1)
            else:
                return out

    @staticmethod
    def _add(out: dict, terms: dict, sign: int) -> None:
        for key, c in terms.items():
            s = out.get(key, 0) + sign * c
            if s:
                out[key] = s
            else:
                out.pop(key, None)

    def term(self) -> dict:
        acc = self.factor()
        while True:
            if self.accept("*"):
                acc = self._mul(acc, self.factor())
            elif self.tok.value == "/" and self.tok.kind == "op":
                tok = self.tok
                self.i += 1
                den = self.factor()
                c = self._as_scalar(den, tok, "division is only defined by a scalar")
                if not c:
                    self.error("division by zero", tok=tok)
                acc = {k: v / c for k, v in acc.items()}
            else:
                return acc

    def _as_scalar(self, terms: dict, tok: _Tok, msg: str):
        if not terms:
            return self.field.zero
        if set(terms) != {(Monomial(), ())}:
            self.error(msg, tok=tok)
        return terms[(Monomial(), ())]

    @staticmethod
    def _mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for (ma, wa), ca in a.items():
            for (mb, wb), cb in b.items():
                key = (ma * mb, wa + wb)
                s = out.get(key, 0) + ca * cb
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def _scalar(self, c) -> dict:
        return {(Monomial(), ()): c} if c else {}

    def factor(self) -> dict:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return self._scalar(self.field(int(tok.value)))
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            k = self.power()
            c = self._as_scalar(inner, tok, "parenthesized groups must be scalars")
            if k < 0 and not c:
                self.error("negative power of zero", tok=tok)
            return self._scalar(c**k)
        if tok.kind == "name":
            self.i += 1
            name = tok.value
            if name in SYMBOL_NAMES:
                val = self.symbols.get(name)
                if val is None:
                    self.error(f"parameter {name!r} is not set", tok=tok)
                return self._scalar(val ** self.power())
            if name == "x":
                self.expect("[")
                a = self.integer()
                self.expect(",")
                b = self.integer()
                self.expect("]")
                k = self.power()
                return {(Monomial.var((a, b), k), ()): self.field.one}
            if name in ("D1", "D2"):
                k = self.power()
                if k < 0:
                    self.error(f"{name} cannot be inverted", tok=tok)
                return {(Monomial(), (Atom(name),) * k): self.field.one}
            # matrix generator
            self.expect("(")
            a = self.integer()
            self.expect(",")
            b = self.integer()
            self.expect(")")
            k = self.power()
            n = (a, b)
            if k > 0:
                return {(Monomial(), (Atom(name, n),) * k): self.field.one}
            if name != "E21":
                self.error(f"{name} cannot be inverted", tok=tok)
            if self.m is None:
                self.error("E21 inverse needs a localized space (give --m)", tok=tok)
            if n != self.m:
                self.error(f"only E21{self.m} is invertible here", tok=tok)
            return {(Monomial(), (Atom(INV, n),) * (-k)): self.field.one}
        expected = {"number", "symbol", "'('", "x[i,j]", "generator"}
        self.error(f"unexpected {tok.value or 'end of input'!r}", expected)


def _setup(text: str, env: ParamEnv | None):
    if env is not None:
        symbols = {"q": env.q, "mu": env.mu, "b": env.b}
        return env.field, symbols
    uses_symbols = any(t.kind == "name" and t.value in SYMBOL_NAMES for t in _tokenize(text))
    if uses_symbols:
        return SYMBOLIC, dict(SYMBOLIC.symbols)
    return RATIONALS, {}


def parse_vector(text: str, env: ParamEnv | None = None, space: ModuleSpace | None = None) -> MVector:
    """Parse a module element such as ``x[1,0]^2 - 3/2*x[0,-1]``."""
    if space is not None and env is None:
        env = space.env
    field, symbols = _setup(text, env)
    p = _Parser(text, field, symbols, None)
    terms = p.parse()
    out = {}
    for (mono, word), c in terms.items():
        if word:
            raise ParseError("algebra generators are not allowed in a vector", text, 0)
        out[mono] = c
    v = MVector(out)
    if space is not None:
        validate_in(space, v)
    return v


def parse_word(text: str, env: ParamEnv | None = None, m: GridIndex | None = None) -> AlgElement:
    """Parse an algebra element such as ``E12(0,0)*E21(1,0)^-2 + 2*D1``."""
    field, symbols = _setup(text, env)
    p = _Parser(text, field, symbols, None if m is None else tuple(m))
    terms = p.parse()
    out = {}
    for (mono, word), c in terms.items():
        if mono:
            raise ParseError("x variables are not allowed in an algebra element", text, 0)
        out[word] = c
    return AlgElement(out)


def parse_index(text: str) -> GridIndex:
    """``"1,-2"`` -> (1, -2)."""
    parts = text.replace("(", "").replace(")", "").split(",")
    if len(parts) != 2:
        raise ParseError(f"expected an index 'i,j', got {text!r}", text, 0, {"i,j"})
    try:
        return (int(parts[0]), int(parts[1]))
    except ValueError:
        raise ParseError(f"expected an index 'i,j', got {text!r}", text, 0, {"i,j"}) from None
