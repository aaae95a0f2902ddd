"""The free-field realization as exact operators on sparse vectors.

Every infinite sum in the realization collapses, on a given monomial, to the
finitely many indices in its support; the per-monomial closed forms below
are exactly those finite sums.  In localized spaces the derivative acts
formally on negative powers of x_m.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .algebra import D1, D2, E11, E22, AlgElement, Atom, MismatchError, theta_closed
from .fock import GridIndex, ModuleSpace, Monomial, MVector, SpaceKind, grid, project_mod_M, validate_in
from .scalar import ParamEnv, Scalar

__all__ = [
    "WeightValue",
    "NotWeightVectorError",
    "act_generator",
    "act_element",
    "apply_E",
    "partial",
    "weight_of",
]


class NotWeightVectorError(ValueError):
    def __init__(self, generator: Atom):
        super().__init__(f"not a weight vector: {generator} does not act diagonally")
        self.generator = generator


def _acc(out: dict, mono: Monomial, c) -> None:
    s = out.get(mono, 0) + c
    if s:
        out[mono] = s
    else:
        out.pop(mono, None)


def _add(a: GridIndex, b: GridIndex) -> GridIndex:
    return (a[0] + b[0], a[1] + b[1])


def _map_monomials(v: MVector, fn: Callable[[Monomial, dict], None]) -> MVector:
    out: dict = {}
    for mono, c in v.terms.items():
        local: dict = {}
        fn(mono, local)
        for mm, a in local.items():
            _acc(out, mm, c * a)
    return MVector._wrap(out)


def partial(n: GridIndex, v: MVector) -> MVector:
    """d/dx_n, formal on negative exponents."""
    n = grid(n)

    def fn(mono: Monomial, out: dict) -> None:
        k = mono.exponent(n)
        if k:
            _acc(out, mono.shift((n, -1)), k)

    return _map_monomials(v, fn)


def _second_order(mono: Monomial, shift: GridIndex, qexp: Callable[[GridIndex, GridIndex], int],
                  env: ParamEnv, sign: int, out: dict) -> None:
    """sign * sum over ordered (s, r) of q^{qexp(s,r)} x_{shift+s+r} d_s d_r."""
    for s, ks in mono:
        for r, kr in mono:
            factor = ks * (ks - 1) if s == r else ks * kr
            if not factor:
                continue
            target = (shift[0] + s[0] + r[0], shift[1] + s[1] + r[1])
            if s == r:
                new = mono.shift((s, -2), (target, 1))
            else:
                new = mono.shift((s, -1), (r, -1), (target, 1))
            _acc(out, new, sign * factor * env.qpow(qexp(s, r)))


def _act_untwisted(env: ParamEnv, g: Atom, v: MVector) -> MVector:
    kind = g.kind
    if kind == "E21":
        n = g.n
        return MVector._wrap({mono.shift((n, 1)): c for mono, c in v.terms.items()})
    if kind in ("D1", "D2"):
        a = 0 if kind == "D1" else 1

        def fn(mono, out):
            val = sum(k * s[a] for s, k in mono)
            if val:
                out[mono] = val

        return _map_monomials(v, fn)
    n1, n2 = n = g.n
    if kind == "E11":
        diag = env.mu if n == (0, 0) else 0

        def fn(mono, out):
            if diag:
                _acc(out, mono, diag)
            for s, k in mono:
                _acc(out, mono.shift((s, -1), (_add(n, s), 1)), -k * env.qpow(s[1] * n1))

        return _map_monomials(v, fn)
    if kind == "E22":

        def fn(mono, out):
            for s, k in mono:
                _acc(out, mono.shift((s, -1), (_add(n, s), 1)), k * env.qpow(s[0] * n2))

        return _map_monomials(v, fn)
    if kind == "E12":
        neg = (-n1, -n2)
        mu_coef = env.mu * env.qpow(-n1 * n2)

        def qexp(s, r):
            return n2 * r[0] + s[1] * n1 + s[1] * r[0]

        def fn(mono, out):
            k = mono.exponent(neg)
            if k and mu_coef:
                _acc(out, mono.shift((neg, -1)), k * mu_coef)
            _second_order(mono, n, qexp, env, -1, out)

        return _map_monomials(v, fn)
    raise ValueError(f"cannot act with atom {g}")


def _mul_inverse(space: ModuleSpace, a: Atom, v: MVector) -> MVector:
    if not space.is_localized:
        raise MismatchError("e21 inverse needs a localized or twisted space")
    if a.n != space.m:
        raise MismatchError(f"inverse atom {a} does not match distinguished index {space.m}")
    m = space.m
    return MVector._wrap({mono.shift((m, -1)): c for mono, c in v.terms.items()})


def act_generator(space: ModuleSpace, g: Atom, v: MVector, *, check: bool = True) -> MVector:
    """Action of one generator (or inverse atom) on ``v`` in ``space``."""
    if check:
        validate_in(space, v)
    if g.is_inverse:
        out = _mul_inverse(space, g, v)
    elif space.kind is SpaceKind.TWISTED:
        u = theta_closed(g, space.env.b, space.m, space.env)
        return act_element(space.localized_view(), u, v, check=False)
    else:
        out = _act_untwisted(space.env, g, v)
    if space.kind is SpaceKind.QUOTIENT:
        out = project_mod_M(out, space.m)
    return out


def act_element(space: ModuleSpace, u: AlgElement, v: MVector, *, check: bool = True) -> MVector:
    """Action of a combination of words; each word acts right to left."""
    if check:
        validate_in(space, v)
    total = MVector()
    for word, c in u.terms.items():
        w = v
        for a in reversed(word):
            if not w:
                break
            w = act_generator(space, a, w, check=False)
        if w:
            total = total + w.scale(c)
    if space.kind is SpaceKind.QUOTIENT:
        total = project_mod_M(total, space.m)
    return total


def apply_E(m: GridIndex, v: MVector, env: ParamEnv) -> MVector:
    """The second-order operator E_m, with e12(-m) = q^{-m1 m2} mu d/dx_m - E_m."""
    m1, m2 = m = grid(m)
    shift = (-m1, -m2)

    def qexp(s, r):
        return -m2 * r[0] - s[1] * m1 + s[1] * r[0]

    def fn(mono, out):
        _second_order(mono, shift, qexp, env, 1, out)

    return _map_monomials(v, fn)


@dataclass(frozen=True)
class WeightValue:
    e11: Scalar
    e22: Scalar
    d1: Scalar
    d2: Scalar

    def as_tuple(self) -> tuple:
        return (self.e11, self.e22, self.d1, self.d2)


CARTAN = (E11((0, 0)), E22((0, 0)), D1, D2)


def weight_of(space: ModuleSpace, v: MVector) -> WeightValue:
    """Eigenvalues of e11(0), e22(0), d1, d2 on a weight vector ``v``."""
    if not v:
        raise ValueError("the zero vector has no weight")
    lead = min(v.terms)
    vals = []
    for g in CARTAN:
        image = act_generator(space, g, v)
        lam = image[lead] / v[lead]
        if image != v.scale(lam):
            raise NotWeightVectorError(g)
        vals.append(lam)
    return WeightValue(*vals)
