"""Sparse Laurent polynomials in the variables x_n, n in Z^2.

A :class:`Monomial` is a sorted tuple of ``((n1, n2), exponent)`` pairs with
no zero exponents.  An :class:`MVector` maps monomials to nonzero scalars.
Which exponents are legal depends on the :class:`ModuleSpace` the vector
lives in; validity is checked with :func:`validate_in`, never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Iterator, Mapping

from .scalar import ParamEnv, Scalar, format_scalar

__all__ = [
    "GridIndex",
    "Monomial",
    "MVector",
    "SpaceKind",
    "ModuleSpace",
    "ValidityError",
    "ZeroVectorError",
    "grid",
    "validate_in",
    "vec_arith",
    "vec_scale",
    "mono_mul",
    "degrees",
    "total_degree",
    "xm_hat_degree",
    "homogeneous_components",
    "project_mod_M",
]

GridIndex = tuple  # (m1, m2), ordered lexicographically


class ValidityError(ValueError):
    """A monomial is not legal in the space it was used in."""

    def __init__(self, msg: str, index: GridIndex | None = None):
        super().__init__(msg)
        self.index = index


class ZeroVectorError(ValueError):
    pass


def grid(n: Iterable[int]) -> GridIndex:
    a, b = n
    return (int(a), int(b))


class Monomial(tuple):
    """Immutable x_{n1}^{k1} x_{n2}^{k2} ... as sorted (index, exponent) pairs."""

    __slots__ = ()

    def __new__(cls, items: Iterable[tuple[GridIndex, int]] | Mapping = ()):
        if isinstance(items, Mapping):
            items = items.items()
        acc: dict[GridIndex, int] = {}
        for idx, e in items:
            idx = grid(idx)
            acc[idx] = acc.get(idx, 0) + int(e)
        return tuple.__new__(cls, sorted((i, e) for i, e in acc.items() if e))

    @classmethod
    def _raw(cls, items) -> "Monomial":
        # items already canonical
        return tuple.__new__(cls, items)

    @classmethod
    def var(cls, n: Iterable[int], k: int = 1) -> "Monomial":
        return cls._raw(((grid(n), k),) if k else ())

    def exponent(self, n: GridIndex) -> int:
        for idx, e in self:
            if idx == n:
                return e
        return 0

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    def shift(self, *deltas: tuple[GridIndex, int]) -> "Monomial":
        d = dict(self)
        for idx, c in deltas:
            e = d.get(idx, 0) + c
            if e:
                d[idx] = e
            else:
                d.pop(idx, None)
        return Monomial._raw(sorted(d.items()))

    def __mul__(self, other: "Monomial") -> "Monomial":  # type: ignore[override]
        return self.shift(*other)

    def __repr__(self) -> str:
        return f"Monomial({format_monomial(self)})"


ONE = Monomial()


def format_monomial(mono: Monomial) -> str:
    if not mono:
        return "1"
    return "*".join(
        f"x[{i},{j}]" + ("" if e == 1 else f"^{e}") for (i, j), e in mono
    )


class MVector:
    """Finite formal sum of monomials with nonzero exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Scalar] = {}
        if terms:
            for mono, c in terms.items():
                if not isinstance(mono, Monomial):
                    mono = Monomial(mono)
                if c:
                    clean[mono] = clean.get(mono, 0) + c
                    if not clean[mono]:
                        del clean[mono]
        self.terms = clean

    @classmethod
    def _wrap(cls, terms: dict) -> "MVector":
        v = cls.__new__(cls)
        v.terms = terms
        return v

    @classmethod
    def monomial(cls, mono: Monomial | Iterable, coeff: Scalar = 1) -> "MVector":
        if not isinstance(mono, Monomial):
            mono = Monomial(mono)
        return cls({mono: coeff})

    @classmethod
    def one(cls, coeff: Scalar = 1) -> "MVector":
        return cls({ONE: coeff})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Scalar]]:
        return iter(self.terms.items())

    def __getitem__(self, mono: Monomial) -> Scalar:
        return self.terms.get(mono, 0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, MVector):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms))

    def __add__(self, other: "MVector") -> "MVector":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return MVector._wrap(out)

    def __neg__(self) -> "MVector":
        return MVector._wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MVector") -> "MVector":
        return self + (-other)

    def scale(self, c: Scalar) -> "MVector":
        if not c:
            return MVector()
        return MVector._wrap({m: a * c for m, a in self.terms.items()})

    # symbolic scalars do not defer on ``c * v``; library code uses scale()
    __rmul__ = scale
    __mul__ = scale

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms)

    def canonical(self) -> "MVector":
        return MVector(self.terms)

    def __repr__(self) -> str:
        return f"MVector({format_vector(self)!r})"

    def __str__(self) -> str:
        return format_vector(self)


def _format_coeff(c: Scalar) -> tuple[str, str]:
    """Split a coefficient into (sign, magnitude) for display."""
    s = format_scalar(c)
    if s.startswith("-") and not s.startswith("-("):
        body = s[1:]
        if "+" not in body and " - " not in body:
            return "-", body
    return "+", s


def format_vector(v: MVector) -> str:
    """Deterministic text form, sorted by monomial; parses back to ``v``."""
    if not v.terms:
        return "0"
    pieces = []
    for mono in sorted(v.terms):
        sign, mag = _format_coeff(v.terms[mono])
        if mono:
            body = format_monomial(mono) if mag == "1" else f"{mag}*{format_monomial(mono)}"
        else:
            body = mag
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


class SpaceKind(str, Enum):
    PLAIN = "plain"
    LOCALIZED = "localized"
    TWISTED = "twisted"
    QUOTIENT = "quotient"


@dataclass(frozen=True)
class ModuleSpace:
    """Which module a vector belongs to: C[x], D_m M, D_m^b M, or D_m M / M."""

    kind: SpaceKind
    env: ParamEnv
    m: GridIndex | None = None

    def __post_init__(self) -> None:
        kind = SpaceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is SpaceKind.PLAIN:
            if self.m is not None:
                object.__setattr__(self, "m", grid(self.m))
        else:
            if self.m is None:
                raise ValueError(f"{kind.value} space needs a distinguished index m")
            object.__setattr__(self, "m", grid(self.m))
        if kind is SpaceKind.TWISTED and self.env.b is None:
            raise ValueError("twisted space needs b in the parameter environment")

    @classmethod
    def plain(cls, env: ParamEnv) -> "ModuleSpace":
        return cls(SpaceKind.PLAIN, env)

    @classmethod
    def localized(cls, env: ParamEnv, m: Iterable[int]) -> "ModuleSpace":
        return cls(SpaceKind.LOCALIZED, env, grid(m))

    @classmethod
    def twisted(cls, env: ParamEnv, m: Iterable[int]) -> "ModuleSpace":
        return cls(SpaceKind.TWISTED, env, grid(m))

    @classmethod
    def quotient(cls, env: ParamEnv, m: Iterable[int]) -> "ModuleSpace":
        return cls(SpaceKind.QUOTIENT, env, grid(m))

    @property
    def is_localized(self) -> bool:
        return self.kind is not SpaceKind.PLAIN

    def localized_view(self) -> "ModuleSpace":
        """The untwisted, unprojected space underlying this one."""
        if self.kind is SpaceKind.PLAIN:
            return self
        return ModuleSpace(SpaceKind.LOCALIZED, self.env, self.m)


def validate_in(space: ModuleSpace, v: MVector | Monomial) -> None:
    """Raise :class:`ValidityError` naming the first illegal index."""
    monos = [v] if isinstance(v, Monomial) else v.terms
    m = space.m if space.is_localized else None
    for mono in monos:
        for idx, e in mono:
            if e < 0 and idx != m:
                raise ValidityError(
                    f"negative exponent {e} at x[{idx[0]},{idx[1]}] is not allowed "
                    f"in a {space.kind.value} space",
                    idx,
                )


def vec_arith(u: MVector, v: MVector, op: str, space: ModuleSpace | None = None) -> MVector:
    if op == "add":
        out = u + v
    elif op == "sub":
        out = u - v
    else:
        raise ValueError(f"unknown vector operation {op!r}")
    if space is not None:
        validate_in(space, out)
    return out


def vec_scale(c: Scalar, v: MVector) -> MVector:
    return v.scale(c)


def mono_mul(mono: Monomial, v: MVector, space: ModuleSpace | None = None) -> MVector:
    """Multiply every term of ``v`` by ``mono`` (exponents add index-wise)."""
    out: dict[Monomial, Any] = {}
    for mm, c in v.terms.items():
        key = mm.shift(*mono)
        out[key] = out.get(key, 0) + c
    res = MVector(out)
    if space is not None:
        validate_in(space, res)
    return res


def _nonzero(v: MVector) -> None:
    if not v:
        raise ZeroVectorError("degree of the zero vector is undefined")


def total_degree(v: MVector) -> int:
    _nonzero(v)
    return max(m.degree for m in v.terms)


def homogeneous_components(v: MVector) -> dict[int, MVector]:
    """Split ``v`` by signed total degree."""
    parts: dict[int, dict] = {}
    for mono, c in v.terms.items():
        parts.setdefault(mono.degree, {})[mono] = c
    return {d: MVector._wrap(t) for d, t in sorted(parts.items())}


def xm_hat_degree(v: MVector, m: GridIndex) -> int:
    """d - z for homogeneous ``v`` of degree d with minimal x_m-exponent z."""
    _nonzero(v)
    comps = homogeneous_components(v)
    if len(comps) != 1:
        raise ValueError("x_m-hat degree needs a homogeneous vector")
    (d,) = comps
    z = min(mono.exponent(grid(m)) for mono in v.terms)
    return d - z


def degrees(v: MVector, m: GridIndex | None = None) -> dict[str, Any]:
    comps = homogeneous_components(v)
    out: dict[str, Any] = {
        "total_degree": total_degree(v),
        "homogeneous_components": comps,
    }
    if m is not None and len(comps) == 1:
        out["xm_hat_degree"] = xm_hat_degree(v, m)
    return out


def project_mod_M(v: MVector, m: GridIndex) -> MVector:
    """Canonical representative in D_m M / M: keep terms with x_m-exponent < 0."""
    m = grid(m)
    return MVector._wrap({mono: c for mono, c in v.terms.items() if mono.exponent(m) < 0})
