"""The Lie algebra gl_2(C_q) + C d_1 + C d_2, words in U^F and the twist Theta_b.

Generators are :class:`Atom` values.  ``E21inv`` atoms stand for the inverse
of e_21(m) adjoined by the Ore localization.  Words are never normal
ordered; two elements are compared semantically by acting on vectors.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, NamedTuple

from .fock import GridIndex, grid
from .scalar import ParamEnv, Scalar, binom, format_scalar

__all__ = [
    "Atom",
    "AlgElement",
    "MismatchError",
    "NilpotencyBoundError",
    "E11",
    "E12",
    "E21",
    "E22",
    "D1",
    "D2",
    "inv_e21",
    "bracket",
    "ad_e21",
    "theta_series",
    "theta_closed",
    "word_mul",
]

MATRIX_KINDS = ("E11", "E12", "E21", "E22")
GENERATOR_KINDS = MATRIX_KINDS + ("D1", "D2")
INV = "E21inv"


class MismatchError(ValueError):
    """An inverse e_21 atom does not match the distinguished index."""


class NilpotencyBoundError(RuntimeError):
    pass


class Atom(NamedTuple):
    kind: str
    n: GridIndex | None = None

    @property
    def is_inverse(self) -> bool:
        return self.kind == INV

    @property
    def ij(self) -> tuple[int, int]:
        return int(self.kind[1]), int(self.kind[2])

    def __str__(self) -> str:
        if self.kind in ("D1", "D2"):
            return self.kind
        name = "E21" if self.is_inverse else self.kind
        text = f"{name}({self.n[0]},{self.n[1]})"
        return text + "^-1" if self.is_inverse else text


def E11(n: Iterable[int]) -> Atom:
    return Atom("E11", grid(n))


def E12(n: Iterable[int]) -> Atom:
    return Atom("E12", grid(n))


def E21(n: Iterable[int]) -> Atom:
    return Atom("E21", grid(n))


def E22(n: Iterable[int]) -> Atom:
    return Atom("E22", grid(n))


D1 = Atom("D1")
D2 = Atom("D2")


def inv_e21(m: Iterable[int]) -> Atom:
    return Atom(INV, grid(m))


def generator(kind: str, n: Iterable[int] | None = None) -> Atom:
    if kind in ("D1", "D2"):
        return Atom(kind)
    if kind not in MATRIX_KINDS:
        raise ValueError(f"unknown generator {kind!r}")
    return Atom(kind, grid(n))


Word = tuple  # tuple[Atom, ...]


class AlgElement:
    """Finite linear combination of words in the atoms."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | None = None):
        clean: dict[Word, Scalar] = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            s = clean.get(w, 0) + c
            if s:
                clean[w] = s
            else:
                clean.pop(w, None)
        self.terms = clean

    @classmethod
    def _wrap(cls, terms: dict) -> "AlgElement":
        u = cls.__new__(cls)
        u.terms = terms
        return u

    @classmethod
    def word(cls, *atoms: Atom, coeff: Scalar = 1) -> "AlgElement":
        return cls({tuple(atoms): coeff})

    @classmethod
    def scalar(cls, c: Scalar) -> "AlgElement":
        return cls({(): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Word, Scalar]]:
        return iter(self.terms.items())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, AlgElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "AlgElement") -> "AlgElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return AlgElement._wrap(out)

    def __neg__(self) -> "AlgElement":
        return AlgElement._wrap({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "AlgElement":
        if not c:
            return AlgElement()
        return AlgElement._wrap({w: a * c for w, a in self.terms.items()})

    __rmul__ = scale

    def __mul__(self, other: "AlgElement") -> "AlgElement":
        if not isinstance(other, AlgElement):
            return self.scale(other)
        return word_mul(self, other)

    def atoms(self) -> set[Atom]:
        return {a for w in self.terms for a in w}

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"AlgElement({format_element(self)!r})"


def format_word(w: Word) -> str:
    if not w:
        return "1"
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        a, k = w[i], j - i
        if a.is_inverse:
            out.append(f"E21({a.n[0]},{a.n[1]})^-{k}")
        else:
            out.append(str(a) + (f"^{k}" if k > 1 else ""))
        i = j
    return "*".join(out)


def format_element(u: AlgElement) -> str:
    if not u.terms:
        return "0"
    pieces = []
    for w, c in sorted(u.terms.items(), key=lambda t: (len(t[0]), t[0])):
        s = format_scalar(c)
        neg = s.startswith("-") and not s.startswith("-(") and "+" not in s[1:] and " - " not in s
        mag = s[1:] if neg else s
        body = mag if not w else (format_word(w) if mag == "1" else f"{mag}*{format_word(w)}")
        pieces.append(("-" if neg else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def word_mul(u: AlgElement, v: AlgElement) -> AlgElement:
    """Bilinear concatenation of words (free product, no reordering)."""
    out: dict[Word, Scalar] = {}
    for w1, c1 in u.terms.items():
        for w2, c2 in v.terms.items():
            w = w1 + w2
            s = out.get(w, 0) + c1 * c2
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    return AlgElement._wrap(out)


def _add(a: GridIndex, b: GridIndex) -> GridIndex:
    return (a[0] + b[0], a[1] + b[1])


def bracket(g: Atom, h: Atom, env: ParamEnv) -> AlgElement:
    """[g, h] as a combination of single generators.

    [e_ij(m), e_kl(n)] = d_jk q^{m2 n1} e_il(m+n) - d_il q^{n2 m1} e_kj(m+n),
    [D_a, X(n)] = n_a X(n), [D1, D2] = 0.
    """
    if g.is_inverse or h.is_inverse:
        raise ValueError("bracket is defined on generators only")
    if g.kind in ("D1", "D2"):
        if h.kind in ("D1", "D2"):
            return AlgElement()
        a = 0 if g.kind == "D1" else 1
        return AlgElement.word(h, coeff=h.n[a]) if h.n[a] else AlgElement()
    if h.kind in ("D1", "D2"):
        return -bracket(h, g, env)
    (i, j), (k, l) = g.ij, h.ij
    m, n = g.n, h.n
    s = _add(m, n)
    out: dict[Word, Scalar] = {}
    if j == k:
        key = (Atom(f"E{i}{l}", s),)
        out[key] = out.get(key, 0) + env.qpow(m[1] * n[0])
    if i == l:
        key = (Atom(f"E{k}{j}", s),)
        out[key] = out.get(key, 0) - env.qpow(n[1] * m[0])
    return AlgElement(out)


def ad_e21(m: Iterable[int], u: AlgElement, env: ParamEnv) -> AlgElement:
    """[e_21(m), u] via the Leibniz rule over every word of ``u``."""
    m = grid(m)
    x = E21(m)
    cache: dict[Atom, AlgElement] = {}
    out: dict[Word, Scalar] = {}
    for w, c in u.terms.items():
        for pos, a in enumerate(w):
            if a.is_inverse:
                if a.n != m:
                    raise MismatchError(f"inverse atom {a} does not match e21{m}")
                continue
            br = cache.get(a)
            if br is None:
                br = cache[a] = bracket(x, a, env)
            for bw, bc in br.terms.items():
                key = w[:pos] + bw + w[pos + 1 :]
                s = out.get(key, 0) + c * bc
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    return AlgElement._wrap(out)


def theta_series(u: AlgElement, b: Scalar, m: Iterable[int], env: ParamEnv) -> AlgElement:
    """sum_j binom(b, j) (ad e_21(m))^j (u) e_21(m)^{-j}, stopped at the first zero term."""
    m = grid(m)
    inv = inv_e21(m)
    longest = max((len(w) for w in u.terms), default=0)
    bound = 3 * longest + 1
    total = AlgElement()
    cur = u
    j = 0
    while cur:
        if j > bound:
            raise NilpotencyBoundError(f"ad e21{m} not nilpotent within {bound} steps")
        coef = binom(b, j)
        if coef:
            tail = AlgElement.word(*([inv] * j))
            total = total + word_mul(cur, tail).scale(coef)
        cur = ad_e21(m, cur, env)
        j += 1
    return total


def theta_closed(g: Atom, b: Scalar, m: Iterable[int], env: ParamEnv) -> AlgElement:
    """Closed form of Theta_b on a single generator."""
    m = grid(m)
    inv = inv_e21(m)
    base = AlgElement.word(g)
    if g.kind == "E21":
        return base
    if g.kind in ("D1", "D2"):
        a = 0 if g.kind == "D1" else 1
        return base - AlgElement.scalar(b * m[a])
    n = g.n
    m1, m2 = m
    n1, n2 = n
    mn = _add(m, n)
    if g.kind == "E11":
        return base + AlgElement.word(E21(mn), inv, coeff=b * env.qpow(m2 * n1))
    if g.kind == "E22":
        return base + AlgElement.word(E21(mn), inv, coeff=-b * env.qpow(m1 * n2))
    # E12
    return (
        base
        + AlgElement.word(E22(mn), inv, coeff=b * env.qpow(m2 * n1))
        + AlgElement.word(E11(mn), inv, coeff=-b * env.qpow(m1 * n2))
        + AlgElement.word(
            E21(_add(m, mn)), inv, inv, coeff=-b * (b - 1) * env.qpow(m2 * n1 + m2 * m1 + m1 * n2)
        )
    )
