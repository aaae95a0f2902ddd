"""Singular vectors, degree reduction, cyclicity chains and ladder checks.

These are finite certificates: each routine builds the explicit vectors and
operators of an irreducibility argument and checks them with the exact
action engine.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable

from ..action import act_element, act_generator, apply_E, partial
from ..algebra import E11, E12, E21, E22, AlgElement, Atom, inv_e21
from ..fock import (
    GridIndex,
    ModuleSpace,
    Monomial,
    MVector,
    SpaceKind,
    format_vector,
    grid,
    homogeneous_components,
    mono_mul,
    project_mod_M,
)
from ..scalar import ParamEnv, Scalar, format_scalar, is_integer
from . import sampling
from .report import ProbeReport, Stopwatch, Verdict

__all__ = [
    "PreconditionError",
    "ConstructionError",
    "ShapeError",
    "singular_vector",
    "reduce_step",
    "reduce_operator",
    "cyclicity_run",
    "quotient_generator_ladder",
    "twisted_ladder_check",
    "nilpotency_probe",
]


class PreconditionError(ValueError):
    pass


class ConstructionError(RuntimeError):
    pass


class ShapeError(ValueError):
    pass


def _neg(m: GridIndex) -> GridIndex:
    return (-m[0], -m[1])


def _xm(m: GridIndex, k: int) -> Monomial:
    return Monomial.var(m, k)


def singular_vector(mu: int, m: Iterable[int], n: Iterable[int], d: int, env: ParamEnv) -> MVector:
    """Nonzero w in D_m M (x_m-exponents all negative) killed by e12(-m).

    w = sum_{j=0}^{d} x_m^{j-l} w_j with l = 2d - mu - 1, w_0 = x_n^d and
    w_j = E_m(w_{j-1}) / a_j, a_j = q^{-m1 m2} (mu + j + l + 1 - 2d)(j - l).
    """
    m, n = grid(m), grid(n)
    if not is_integer(Fraction(mu)):
        raise PreconditionError(f"mu must be an integer, got {mu}")
    mu = int(Fraction(mu))
    if d < 1:
        raise PreconditionError("d must be a positive integer")
    if not (-d + mu + 1 < 0):
        raise PreconditionError(f"need -d + mu + 1 < 0, got d={d}, mu={mu}")
    if n[0] * m[1] - n[1] * m[0] == 0:
        raise PreconditionError(f"need n1*m2 - n2*m1 != 0 for m={m}, n={n}")
    env = env.with_params(mu=mu)
    l = 2 * d - mu - 1
    qm = env.qpow(-m[0] * m[1])
    wj = MVector.monomial(Monomial.var(n, d), env.field.one)
    w = mono_mul(_xm(m, -l), wj)
    for j in range(1, d + 1):
        a = qm * (mu + j + l + 1 - 2 * d) * (j - l)
        if not a:
            raise ConstructionError(f"a_{j} vanishes")
        wj = apply_E(m, wj, env).scale(1 / a)
        if partial(m, wj):
            raise ConstructionError(f"w_{j} depends on x_m")
        w = w + mono_mul(_xm(m, j - l), wj)
    if apply_E(m, wj, env):
        raise ConstructionError("E_m does not kill w_d")
    return w


def _split_shape(v: MVector, m: GridIndex) -> tuple[int, list[Monomial]]:
    """Check v = x_m^{-1} f with f homogeneous, free of x_m; return deg f."""
    if not v:
        raise ShapeError("zero vector")
    degs = set()
    for mono in v.terms:
        if mono.exponent(m) != -1:
            raise ShapeError(f"monomial {mono} does not have x_m-exponent -1")
        degs.add(mono.degree + 1)
    if len(degs) != 1:
        raise ShapeError("f is not homogeneous")
    return degs.pop(), list(v.terms)


def _pick_index(v: MVector, m: GridIndex) -> tuple[GridIndex, int]:
    best: tuple[int, GridIndex] | None = None
    for mono in v.terms:
        for idx, e in mono:
            if idx == m:
                continue
            if best is None or e > best[0] or (e == best[0] and idx < best[1]):
                best = (e, idx)
    assert best is not None
    return best[1], best[0]


def reduce_operator(env: ParamEnv, m: GridIndex, n1: GridIndex, d: int) -> AlgElement:
    """(e12(-m)e21(m) + B)(e12(-m)e21(m) + A) e12(-n1) for deg f = d."""
    qm = env.qpow(-m[0] * m[1])
    A = -2 * (2 * d - env.mu - 1) * qm
    B = -(2 * d - env.mu - 2) * qm
    raise_lower = AlgElement.word(E12(_neg(m)), E21(m))
    first = raise_lower + AlgElement.scalar(A)
    second = raise_lower + AlgElement.scalar(B)
    return second * first * AlgElement.word(E12(_neg(n1)))


def reduce_step(v: MVector, env: ParamEnv, m: Iterable[int]) -> tuple[MVector, GridIndex]:
    """One degree-lowering step x_m^{-1} f -> x_m^{-1} f_1 in D_m M / M."""
    m = grid(m)
    if is_integer(env.mu):
        raise PreconditionError("degree reduction needs mu not in Z")
    v = project_mod_M(v, m)
    d, _ = _split_shape(v, m)
    if d < 1:
        raise ShapeError("f has degree 0; nothing to reduce")
    n1, _ = _pick_index(v, m)
    space = ModuleSpace.quotient(env, m)
    out = act_element(space, reduce_operator(env, m, n1, d), v)
    if not out:
        raise ConstructionError(f"reduction produced 0 from {format_vector(v)}")
    d1, _ = _split_shape(out, m)
    if d1 != d - 1:
        raise ConstructionError(f"degree went from {d} to {d1}")
    return out, n1


def _normalize_component(v: MVector, m: GridIndex) -> tuple[MVector, int]:
    """Multiply a homogeneous quotient vector by x_m^k so it becomes x_m^{-1} f."""
    z = min(mono.exponent(m) for mono in v.terms)
    k = -1 - z
    return project_mod_M(mono_mul(_xm(m, k), v), m), k


def cyclicity_run(v: MVector, env: ParamEnv, m: Iterable[int], max_steps: int = 16) -> ProbeReport:
    """Drive each homogeneous part of ``v`` down to a multiple of x_m^{-1}."""
    m = grid(m)
    params = {**env.params(), "m": list(m), "vector": format_vector(v)}
    with Stopwatch() as sw:
        if is_integer(env.mu):
            raise PreconditionError("cyclicity needs mu not in Z")
        v = project_mod_M(v, m)
        if not v:
            raise PreconditionError("v is zero in D_m M / M")
        chain = []
        verdict = Verdict.VERIFIED
        total_steps = 0
        for deg, part in homogeneous_components(v).items():
            cur, k = _normalize_component(part, m)
            f_deg, _ = _split_shape(cur, m)
            entry = {"component_degree": deg, "premultiply": k, "start": format_vector(cur),
                     "f_degree": f_deg, "steps": []}
            while f_deg > 0:
                if total_steps >= max_steps:
                    verdict = Verdict.INCONCLUSIVE
                    break
                cur, n1 = reduce_step(cur, env, m)
                f_deg -= 1
                total_steps += 1
                entry["steps"].append({"index": list(n1), "f_degree": f_deg, "terms": len(cur)})
            entry["end"] = format_vector(cur)
            chain.append(entry)
            if verdict is not Verdict.VERIFIED:
                break
            if set(cur.terms) != {_xm(m, -1)}:
                raise ConstructionError("chain did not end at a multiple of x_m^{-1}")
    return ProbeReport("cyclicity", verdict, trials=1, params=params, chain=chain,
                       details={"steps": total_steps}, runtime_ms=sw.ms)


def quotient_generator_ladder(env: ParamEnv, m: Iterable[int], i_max: int,
                              js: Iterable[int] = (1, 2, 5)) -> ProbeReport:
    """Iterate e12(-m) on x_m^{-j} in D_m M / M and compare with

    e12(-m)^i x_m^{-j} = (-1)^i q^{-i m1 m2} j...(j+i-1) (mu+j+1)...(mu+j+i) x_m^{-j-i}.
    """
    m = grid(m)
    space = ModuleSpace.quotient(env, m)
    g = E12(_neg(m))
    qm = env.qpow(-m[0] * m[1])
    chain = []
    coefs: dict[tuple[int, int], Scalar] = {}
    witness = None
    with Stopwatch() as sw:
        for j in js:
            cur = MVector.monomial(_xm(m, -j), env.field.one)
            coef: Scalar = env.field.one
            for i in range(1, i_max + 1):
                cur = act_generator(space, g, cur)
                coef = coef * (-1) * qm * (j + i - 1) * (env.mu + j + i)
                expected = MVector.monomial(_xm(m, -j - i), coef)
                if cur != expected:
                    witness = {"j": j, "i": i, "expected": format_vector(expected), "got": format_vector(cur)}
                    break
                coefs[j, i] = coef
                chain.append({"j": j, "i": i, "coefficient": format_scalar(coef)})
            if witness:
                break
        if witness is None and 1 in js and i_max >= 1:
            # the j = 1 case is also the closed form (-1)^i i! (mu+2)...(mu+1+i)
            closed = env.field.one
            for i in range(1, i_max + 1):
                closed = closed * (env.mu + 1 + i)
            closed = (-1) ** i_max * factorial(i_max) * qm**i_max * closed
            if closed != coefs[1, i_max]:
                witness = {"j": 1, "i": i_max, "expected": format_scalar(closed),
                           "got": format_scalar(coefs[1, i_max])}
    verdict = Verdict.VERIFIED if witness is None else Verdict.COUNTEREXAMPLE
    return ProbeReport("quotient-ladder", verdict, trials=len(chain),
                       params={**env.params(), "m": list(m), "i_max": i_max, "js": list(js)},
                       witness=witness, chain=chain, runtime_ms=sw.ms)


def twisted_ladder_check(env: ParamEnv, m: Iterable[int], d: int, k_max: int,
                         vectors: Iterable[MVector] | None = None, seed: int = 0) -> ProbeReport:
    """Commutator identity for e21(m)^{-1} and the B_k ladder on w = x_m^d (p = d)."""
    m = grid(m)
    if env.b is None:
        raise PreconditionError("twisted ladder needs b")
    space = ModuleSpace.twisted(env, m)
    qm = env.qpow(-m[0] * m[1])
    mu, b = env.mu, env.b
    lower = E12(_neg(m))
    inv = inv_e21(m)
    h = AlgElement.word(E11((0, 0))) - AlgElement.word(E22((0, 0)))
    witness = None
    chain: list = []

    def act(a, v):
        return act_generator(space, a, v, check=False)

    with Stopwatch() as sw:
        if vectors is None:
            rng = sampling.sub_rng(seed, "twisted-ladder", *m, d)
            vectors = [sampling.vector(rng, space) for _ in range(5)]
            vectors.append(MVector.monomial(Monomial([(m, -1), ((m[0] + 1, m[1] - 1), 1)])))
        for v in vectors:
            lhs = act(inv, act(lower, v)) - act(lower, act(inv, v))
            rhs = act(inv, act_element(space, h, act(inv, v), check=False)).scale(qm)
            if lhs != rhs:
                witness = {"check": "commutator", "vector": format_vector(v),
                           "expected": format_vector(rhs), "got": format_vector(lhs)}
                break
        p = d
        w = MVector.monomial(_xm(m, d), env.field.one)

        def B(i):
            return (i + b - p) * (2 * d - b - mu - 1 - i - p) * qm

        if witness is None:
            # eigen-relation: (e21(m) e12(-m) - (b-p)(2d-mu-b-p-1) q^{-m1m2}) w = 0
            eig = act(E21(m), act(lower, w)) - w.scale((b - p) * (2 * d - mu - b - p - 1) * qm)
            if eig:
                witness = {"check": "eigen-relation", "got": format_vector(eig)}
        prod = env.field.one
        power = w
        for k in range(k_max + 1):
            if witness is not None:
                break
            shifted = MVector.monomial(_xm(m, d - k), env.field.one)
            step = act(lower, shifted)
            want = MVector.monomial(_xm(m, d - k - 1), B(k))
            if step != want:
                witness = {"check": "B_k", "k": k, "expected": format_vector(want), "got": format_vector(step)}
                break
            weight = act_element(space, h, shifted, check=False)
            if weight != shifted.scale(mu - 2 * d + 2 * b + 2 * k):
                witness = {"check": "h-weight", "k": k, "got": format_vector(weight)}
                break
            # e12(-m)^k w = B_0 ... B_{k-1} e21(m)^{-k} w
            if power != shifted.scale(prod):
                witness = {"check": "product", "k": k, "expected": format_vector(shifted.scale(prod)),
                           "got": format_vector(power)}
                break
            chain.append({"k": k, "B_k": format_scalar(B(k))})
            prod = prod * B(k)
            power = act(lower, power)
        nonvanishing = None
        if not is_integer(b + mu):
            nonvanishing = all(B(k) for k in range(k_max + 1))
            if witness is None and not nonvanishing:
                witness = {"check": "B_k nonvanishing"}
    verdict = Verdict.VERIFIED if witness is None else Verdict.COUNTEREXAMPLE
    return ProbeReport("twisted-ladder", verdict, trials=len(chain),
                       params={**env.params(), "m": list(m), "d": d, "k_max": k_max},
                       witness=witness, chain=chain,
                       details={"nonvanishing": nonvanishing}, runtime_ms=sw.ms)


def nilpotency_probe(space: ModuleSpace, g: Atom, v: MVector, max_iter: int) -> ProbeReport:
    """Smallest k <= max_iter with g^k v = 0, else the surviving vector's profile."""
    chain = []
    cur = v
    verdict = Verdict.INCONCLUSIVE
    k_found = None
    with Stopwatch() as sw:
        if space.kind is SpaceKind.QUOTIENT:
            cur = project_mod_M(cur, space.m)
        if not cur:
            verdict, k_found = Verdict.VERIFIED, 0
        for k in range(1, max_iter + 1):
            if k_found is not None:
                break
            cur = act_generator(space, g, cur)
            if not cur:
                verdict, k_found = Verdict.VERIFIED, k
                break
            comps = homogeneous_components(cur)
            chain.append({"iteration": k, "terms": len(cur), "degrees": sorted(comps)})
    details = {"generator": str(g)}
    if k_found is not None:
        details["nilpotency_index"] = k_found
    else:
        details["survivor"] = format_vector(cur) if len(cur) <= 8 else f"<{len(cur)} terms>"
    params = {**space.env.params(), "space": space.kind.value, "vector": format_vector(v)}
    if space.m is not None:
        params["m"] = list(space.m)
    return ProbeReport("nilpotency", verdict, trials=len(chain), params=params,
                       chain=chain, details=details, runtime_ms=sw.ms)
