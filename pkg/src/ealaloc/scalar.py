"""Exact coefficient fields.

Two backends share one duck-typed interface (``+ - * /``, integer powers,
``==``, truthiness):

* the *specialized* backend stores :class:`fractions.Fraction` values and is
  used with concrete rational parameters ``q, mu, b``;
* the *symbolic* backend stores reduced rational functions in ``q, mu, b``
  over the rationals (``sympy.polys.fields``).

Everything that touches coefficients goes through a :class:`ParamEnv`, which
owns the field and the parameter values.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Mapping, Union

from sympy import QQ
from sympy.polys.fields import FracElement
from sympy.polys.fields import field as _frac_field

__all__ = [
    "ScalarError",
    "RATIONALS",
    "SYMBOLIC",
    "ParamEnv",
    "field_arith",
    "q_power",
    "binom",
    "is_integer",
    "evaluate",
    "format_scalar",
    "parse_rational",
]

Scalar = Union[Fraction, FracElement, int]

SYMBOL_NAMES = ("q", "mu", "b")


class ScalarError(ArithmeticError):
    """Raised for illegal field operations (division by zero, bad literals)."""


class RationalField:
    """Specialized backend: plain rationals."""

    name = "rational"
    symbolic = False

    def __call__(self, value: Any) -> Fraction:
        if isinstance(value, FracElement):
            raise ScalarError("cannot embed a rational function into the rationals")
        return Fraction(value)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __repr__(self) -> str:
        return "QQ"


class SymbolicField:
    """Symbolic backend: the rational function field QQ(q, mu, b)."""

    name = "symbolic"
    symbolic = True

    def __init__(self) -> None:
        self.K, *gens = _frac_field(",".join(SYMBOL_NAMES), QQ)
        self.symbols = dict(zip(SYMBOL_NAMES, gens))

    def __call__(self, value: Any) -> FracElement:
        if isinstance(value, FracElement):
            return value
        if isinstance(value, str):
            return self.symbols[value]
        value = Fraction(value)
        return self.K(QQ(value.numerator, value.denominator))

    @property
    def zero(self) -> FracElement:
        return self.K.zero

    @property
    def one(self) -> FracElement:
        return self.K.one

    def __repr__(self) -> str:
        return "QQ(q, mu, b)"


RATIONALS = RationalField()
SYMBOLIC = SymbolicField()


def _to_fraction(c: Any) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def field_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Exact ``a <op> b`` for ``op`` in add/sub/mul/div."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown field operation {op!r}") from None
    if op == "div" and not b:
        raise ScalarError("division by zero")
    return fn(a, b)


def binom(b: Scalar, j: int) -> Scalar:
    """Generalized binomial coefficient b(b-1)...(b-j+1)/j!."""
    if j < 0:
        raise ValueError("binom requires j >= 0")
    out: Scalar = 1
    for i in range(j):
        out = out * (b - i) / (i + 1)
    return out if not isinstance(out, int) else Fraction(out)


def is_integer(x: Scalar) -> bool:
    """True when ``x`` is a rational integer (symbols never are)."""
    if isinstance(x, int):
        return True
    if isinstance(x, Fraction):
        return x.denominator == 1
    if isinstance(x, FracElement):
        if not (x.numer.is_ground and x.denom.is_ground):
            return False
        c = _to_fraction(x.numer.LC) / _to_fraction(x.denom.LC) if x.numer else Fraction(0)
        return c.denominator == 1
    raise TypeError(f"not a scalar: {x!r}")


def evaluate(x: Scalar, values: Mapping[str, Any]) -> Fraction:
    """Specialize a symbolic scalar at rational values of q, mu, b."""
    if not isinstance(x, FracElement):
        return Fraction(x)
    point = [Fraction(values.get(s, 0)) for s in SYMBOL_NAMES]

    def ev(poly) -> Fraction:
        total = Fraction(0)
        for exps, c in poly.terms():
            term = _to_fraction(c)
            for v, e in zip(point, exps):
                if e:
                    term *= v**e
            total += term
        return total

    den = ev(x.denom)
    if den == 0:
        raise ScalarError("denominator vanishes at the evaluation point")
    return ev(x.numer) / den


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer literal."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ScalarError(f"bad rational literal {text!r}") from exc


def _format_poly(poly) -> tuple[str, int]:
    parts = []
    for exps, c in poly.terms():
        c = _to_fraction(c)
        vars_ = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(SYMBOL_NAMES, exps)
            if e
        ]
        if not vars_:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(vars_))
        elif c == -1:
            parts.append("-" + "*".join(vars_))
        else:
            parts.append("*".join([str(c), *vars_]))
    text = " + ".join(parts).replace("+ -", "- ")
    return text, len(parts)


def format_scalar(x: Scalar) -> str:
    """Render a scalar in the CLI expression grammar."""
    if not isinstance(x, FracElement):
        return str(Fraction(x))
    num, nterms = _format_poly(x.numer)
    if x.denom == 1:
        return num if nterms == 1 else f"({num})"
    den, dterms = _format_poly(x.denom)
    if nterms > 1:
        num = f"({num})"
    if dterms > 1 or "*" in den or "^" in den:
        den = f"({den})"
    return f"{num}/{den}"


@dataclass(frozen=True)
class ParamEnv:
    """Field plus the parameters ``q`` (invertible), ``mu`` and optional ``b``."""

    field: Any
    q: Scalar
    mu: Scalar
    b: Scalar | None = None
    _qcache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.q:
            raise ScalarError("q must be nonzero")

    @classmethod
    def make(cls, q: Any = "q", mu: Any = "mu", b: Any = None) -> "ParamEnv":
        """Build an environment; any parameter given as its symbol name
        switches the whole environment to the symbolic backend."""
        raw = {"q": q, "mu": mu, "b": b}
        symbolic = any(
            isinstance(v, FracElement) or (isinstance(v, str) and v in SYMBOL_NAMES)
            for v in raw.values()
        )
        fld = SYMBOLIC if symbolic else RATIONALS
        conv = {}
        for name, v in raw.items():
            if v is None:
                conv[name] = None
            elif isinstance(v, str) and v not in SYMBOL_NAMES:
                conv[name] = fld(parse_rational(v))
            else:
                conv[name] = fld(v)
        return cls(fld, conv["q"], conv["mu"], conv["b"])

    @classmethod
    def symbolic(cls, with_b: bool = True) -> "ParamEnv":
        return cls.make("q", "mu", "b" if with_b else None)

    def with_params(self, **changes: Any) -> "ParamEnv":
        conv = {k: (None if v is None else self.field(v)) for k, v in changes.items()}
        return replace(self, _qcache={}, **conv)

    def qpow(self, k: int) -> Scalar:
        try:
            return self._qcache[k]
        except KeyError:
            val = self.q**k
            self._qcache[k] = val
            return val

    def convert(self, value: Any) -> Scalar:
        return self.field(value)

    def params(self) -> dict[str, str]:
        out = {"backend": self.field.name, "q": format_scalar(self.q), "mu": format_scalar(self.mu)}
        if self.b is not None:
            out["b"] = format_scalar(self.b)
        return out


def q_power(env: ParamEnv, k: int) -> Scalar:
    """q**k for any integer k."""
    return env.qpow(k)
