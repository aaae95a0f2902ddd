"""Seeded randomized identity batteries.

Every trial draws its own parameter points and inputs from a sub-stream
derived from ``(seed, suite, trial, point)``, so reports do not depend on
evaluation order.  An identity counts as verified for a trial only when it
holds exactly at all sampled parameter points.
"""

from __future__ import annotations

from typing import Callable

from ..action import act_element, act_generator, apply_E, partial
from ..algebra import E12, AlgElement, Atom, bracket, theta_closed, theta_series, word_mul
from ..fock import ModuleSpace, Monomial, MVector, format_vector, mono_mul
from . import sampling
from .report import ProbeReport, Stopwatch, Verdict

__all__ = ["SUITES", "identity_suites"]

POINTS = 3


class Mismatch(Exception):
    def __init__(self, check: str, expected, got, **inputs):
        super().__init__(check)
        self.witness = {
            "check": check,
            "inputs": {k: str(v) for k, v in inputs.items()},
            "expected": str(expected),
            "got": str(got),
        }


def _expect(check: str, got, expected, **inputs) -> None:
    if got != expected:
        raise Mismatch(check, expected, got, **inputs)


def _space(rng, kind: str, env, window: int = 2) -> ModuleSpace:
    if kind == "plain":
        return ModuleSpace.plain(env)
    return ModuleSpace(kind, env, sampling.index(rng, window))


# -- bracket -----------------------------------------------------------------

def _trial_bracket(rng) -> None:
    env = sampling.env(rng, with_b=False)
    x, y, z = (sampling.generator(rng) for _ in range(3))

    def br(a: Atom, u: AlgElement) -> AlgElement:
        out = AlgElement()
        for w, c in u.terms.items():
            (g,) = w
            out = out + bracket(a, g, env).scale(c)
        return out

    jac = (
        br(x, bracket(y, z, env)) + br(y, bracket(z, x, env)) + br(z, bracket(x, y, env))
    )
    _expect("jacobi", jac, AlgElement(), x=x, y=y, z=z, **env.params())
    _expect("antisymmetry", bracket(x, y, env), -bracket(y, x, env), x=x, y=y, **env.params())


# -- homomorphism --------------------------------------------------------------

def _trial_homomorphism(rng) -> None:
    env = sampling.env(rng)
    space = _space(rng, rng.choice(["plain", "localized", "twisted"]), env)
    x, y = sampling.generator(rng), sampling.generator(rng)
    v = sampling.vector(rng, space)
    lhs = act_generator(space, x, act_generator(space, y, v)) - act_generator(space, y, act_generator(space, x, v))
    rhs = act_element(space, bracket(x, y, env), v)
    _expect("homomorphism", lhs, rhs, space=space.kind.value, m=space.m, x=x, y=y, v=format_vector(v),
            **env.params())


# -- theta ---------------------------------------------------------------------

def _trial_theta(rng) -> None:
    env = sampling.env(rng)
    m = sampling.index(rng)
    loc = ModuleSpace.localized(env, m)
    b = env.b
    g = sampling.generator(rng)
    v = sampling.vector(rng, loc)
    closed = theta_closed(g, b, m, env)
    series = theta_series(AlgElement.word(g), b, m, env)
    _expect("theta closed=series", act_element(loc, closed, v), act_element(loc, series, v),
            g=g, m=m, v=format_vector(v), **env.params())

    # integer twist is conjugation by x_m^k
    k = rng.randint(-3, 3)
    u = AlgElement.word(sampling.generator(rng), sampling.generator(rng))
    lhs = act_element(loc, theta_series(u, env.field(k), m, env), v)
    rhs = mono_mul(Monomial.var(m, k), act_element(loc, u, mono_mul(Monomial.var(m, -k), v)))
    _expect("theta integer conjugation", lhs, rhs, u=u, k=k, m=m, v=format_vector(v), **env.params())

    # multiplicativity
    u1, u2 = AlgElement.word(sampling.generator(rng)), AlgElement.word(sampling.generator(rng))
    lhs = act_element(loc, theta_series(word_mul(u1, u2), b, m, env), v)
    rhs = act_element(loc, word_mul(theta_series(u1, b, m, env), theta_series(u2, b, m, env)), v)
    _expect("theta multiplicative", lhs, rhs, u1=u1, u2=u2, m=m, v=format_vector(v), **env.params())

    # twisted space action equals acting with the series image
    tw = ModuleSpace.twisted(env, m)
    _expect("twisted action", act_generator(tw, g, v), act_element(loc, series, v),
            g=g, m=m, v=format_vector(v), **env.params())


# -- lemmas --------------------------------------------------------------------

def _trial_lemmas(rng) -> None:
    env = sampling.env(rng, with_b=False)
    m = sampling.index(rng, 3)
    loc = ModuleSpace.localized(env, m)
    qm = env.qpow(-m[0] * m[1])
    v0 = sampling.monomial(rng, window=3, max_degree=5, m=m, avoid_m=True)
    d = v0.degree
    i = rng.randint(1, 5)
    lower = E12((-m[0], -m[1]))
    v0v = MVector.monomial(v0, env.field.one)

    # item (1)
    got = act_generator(loc, lower, mono_mul(Monomial.var(m, -i), v0v))
    want = -mono_mul(Monomial.var(m, -i), apply_E(m, v0v, env)) + mono_mul(
        Monomial.var(m, -i - 1), v0v
    ).scale((2 * d - env.mu - i - 1) * i * qm)
    _expect("lemma item 1", got, want, m=m, v0=format_vector(v0v), i=i, **env.params())

    # item (2)
    got = act_generator(loc, lower, MVector.monomial(Monomial.var(m, -i), env.field.one))
    want = MVector.monomial(Monomial.var(m, -i - 1), (-env.mu - i - 1) * i * qm)
    _expect("lemma item 2", got, want, m=m, i=i, **env.params())

    # item (3)
    w = v0v
    for _ in range(d + 1):
        w = apply_E(m, w, env)
    _expect("lemma item 3", w, MVector(), m=m, v0=format_vector(v0v), **env.params())

    # e12(-m) = q^{-m1 m2} mu d/dx_m - E_m on a general localized vector
    v = sampling.vector(rng, loc)
    got = act_generator(loc, lower, v)
    want = partial(m, v).scale(qm * env.mu) - apply_E(m, v, env)
    _expect("E_m decomposition", got, want, m=m, v=format_vector(v), **env.params())


SUITES: dict[str, Callable] = {
    "bracket": _trial_bracket,
    "homomorphism": _trial_homomorphism,
    "theta": _trial_theta,
    "lemmas": _trial_lemmas,
}


def identity_suites(suite: str = "all", trials: int = 100, seed: int = 0,
                    points: int = POINTS) -> ProbeReport:
    """Run one battery (or ``all``) for ``trials`` trials at ``points`` parameter points each."""
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    witness = None
    done = 0
    per_suite: dict[str, int] = {}
    with Stopwatch() as sw:
        for name in names:
            count = 0
            for t in range(trials):
                try:
                    for p in range(points):
                        SUITES[name](sampling.sub_rng(seed, name, t, p))
                except Mismatch as exc:
                    witness = {"suite": name, "trial": t, "point": p, **exc.witness}
                    break
                count += 1
            per_suite[name] = count
            done += count
            if witness:
                break
    verdict = Verdict.VERIFIED if witness is None else Verdict.COUNTEREXAMPLE
    return ProbeReport(suite, verdict, trials=done, seed=seed,
                       params={"points_per_trial": points, "trials_per_suite": trials},
                       witness=witness, details={"passed": per_suite}, runtime_ms=sw.ms)
