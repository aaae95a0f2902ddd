"""Acceptance gate: one test per criterion, each at its stated budget.

Run ``pytest tests/test_acceptance.py`` (or this file as a script); the
terminal summary prints one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import subprocess
import sys
import time
from fractions import Fraction

import pytest

from ealaloc.action import act_element, act_generator, apply_E
from ealaloc.algebra import D1, D2, E11, E12, E22, GENERATOR_KINDS, AlgElement, Atom, bracket, theta_closed, theta_series
from ealaloc.fock import ModuleSpace, Monomial, MVector, mono_mul
from ealaloc.parsing import parse_vector
from ealaloc.scalar import ParamEnv
from ealaloc.verify import sampling
from ealaloc.verify.constructions import (
    cyclicity_run,
    nilpotency_probe,
    quotient_generator_ladder,
    singular_vector,
    twisted_ladder_check,
)
from ealaloc.verify.report import Verdict
from ealaloc.verify.span import span_probe
from ealaloc.verify.suites import identity_suites


def criterion(number: int, title: str):
    def mark(fn):
        fn.criterion = number
        fn.title = title
        return fn

    return mark


class Budget:
    def __init__(self, seconds: float):
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, *_):
        self.elapsed = time.perf_counter() - self.t0
        if exc_type is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


def xm(m, k, env) -> MVector:
    return MVector.monomial(Monomial.var(m, k), env.field.one)


@criterion(1, "homomorphism on 500 random triples (plain/localized/twisted)")
def test_criterion_01_homomorphism():
    kinds = ("plain", "localized", "twisted")
    seen = dict.fromkeys(kinds, 0)
    with Budget(30):
        for t in range(500):
            rng = sampling.sub_rng(2024, "acceptance-1", t)
            env = sampling.env(rng)
            kind = kinds[t % 3]
            space = ModuleSpace(kind, env, None if kind == "plain" else sampling.index(rng))
            x, y = sampling.generator(rng), sampling.generator(rng)
            v = sampling.vector(rng, space)
            lhs = act_generator(space, x, act_generator(space, y, v)) - act_generator(
                space, y, act_generator(space, x, v))
            assert lhs == act_element(space, bracket(x, y, env), v), (kind, x, y, v, env.params())
            seen[kind] += 1
    assert sum(seen.values()) == 500 and min(seen.values()) > 100


@criterion(2, "vacuum is a highest weight vector")
def test_criterion_02_highest_weight():
    env = ParamEnv.symbolic(with_b=False)
    space = ModuleSpace.plain(env)
    one = MVector.one(env.field.one)
    for i in range(-3, 4):
        for j in range(-3, 4):
            assert act_generator(space, E12((i, j)), one) == 0
    assert act_generator(space, E11((0, 0)), one) == one.scale(env.mu)
    assert act_generator(space, E22((0, 0)), one) == 0
    assert act_generator(space, D1, one) == 0
    assert act_generator(space, D2, one) == 0


@criterion(3, "twist closed forms equal the series; integer twist is conjugation")
def test_criterion_03_theta():
    with Budget(10):
        rng = sampling.sub_rng(2024, "acceptance-3")
        for kind in GENERATOR_KINDS:
            for _ in range(20):
                env = sampling.env(rng)
                m = sampling.index(rng)
                loc = ModuleSpace.localized(env, m)
                g = Atom(kind) if kind in ("D1", "D2") else Atom(kind, sampling.index(rng))
                v = sampling.vector(rng, loc)
                closed = theta_closed(g, env.b, m, env)
                series = theta_series(AlgElement.word(g), env.b, m, env)
                assert act_element(loc, closed, v) == act_element(loc, series, v), (g, m, v)
        for k in range(-3, 4):
            for _ in range(5):
                env = sampling.env(rng, b=Fraction(k))
                m = sampling.index(rng)
                loc = ModuleSpace.localized(env, m)
                g = sampling.generator(rng)
                v = sampling.vector(rng, loc)
                lhs = act_element(loc, theta_closed(g, env.b, m, env), v)
                rhs = mono_mul(Monomial.var(m, k), act_generator(loc, g, mono_mul(Monomial.var(m, -k), v)))
                assert lhs == rhs, (k, g, m, v)


@criterion(4, "lemma items (1)-(3) on 100 random monomials")
def test_criterion_04_lemmas():
    rep = identity_suites("lemmas", trials=100, seed=2024, points=1)
    assert rep.verdict is Verdict.VERIFIED, rep.witness
    assert rep.details["passed"] == {"lemmas": 100}
    # item (3) once more, directly, with the maximal degree
    env = ParamEnv.make(Fraction(7, 3), Fraction(-1, 4))
    m = (1, 2)
    v = parse_vector("x[0,1]^2*x[-3,3]*x[2,-1]*x[3,0]")
    w = v
    for _ in range(v.monomials()[0].degree + 1):
        w = apply_E(m, w, env)
    assert w == 0


@criterion(5, "singular vectors are annihilated; worked instance matches")
def test_criterion_05_singular():
    with Budget(5):
        for mu, d in ((0, 2), (1, 3), (2, 4), (-1, 1)):
            for m, n in (((1, 0), (0, 1)), ((1, -1), (2, 1))):
                for env in (ParamEnv.make(Fraction(-5, 3), mu), ParamEnv.symbolic(with_b=False)):
                    w = singular_vector(mu, m, n, d, env)
                    assert w
                    loc = ModuleSpace.localized(env.with_params(mu=mu), m)
                    assert act_generator(loc, E12((-m[0], -m[1])), w) == 0
        env = ParamEnv.symbolic(with_b=False)
        w = singular_vector(0, (1, 0), (0, 1), 2, env)
        want = parse_vector("x[1,0]^-3*x[0,1]^2 - q^-1*x[1,0]^-2*x[-1,2]", env)
        lead = Monomial([((1, 0), -3), ((0, 1), 2)])
        assert w == want.scale(w[lead] / want[lead])


@criterion(6, "cyclicity chains reach x_m^-1 in exactly deg f steps")
def test_criterion_06_cyclicity():
    with Budget(60):
        for t in range(20):
            rng = sampling.sub_rng(2024, "acceptance-6", t)
            env = ParamEnv.make(sampling.rational(rng), sampling.non_integer(rng))
            m = sampling.index(rng)
            d = 1 + t % 4
            terms = {}
            for _ in range(rng.randint(1, 3)):
                f = Monomial([(sampling.index_not(rng, m), 1) for _ in range(d)])
                terms[f.shift((m, -1))] = sampling.rational(rng, 9)
            v = MVector(terms)
            rep = cyclicity_run(v, env, m)
            assert rep.verdict is Verdict.VERIFIED
            assert rep.details["steps"] == d
            end = parse_vector(rep.chain[-1]["end"], env)
            assert set(end.terms) == {Monomial.var(m, -1)}


@criterion(7, "integer mu: x_m^-5 survives 10 lowering steps in the quotient")
def test_criterion_07_reducibility():
    for mu in (-1, 0, 1, 2):
        env = ParamEnv.make(Fraction(3, 4), mu)
        m = (1, 1)
        quo = ModuleSpace.quotient(env, m)
        g = E12((-m[0], -m[1]))
        start = xm(m, -5, env)
        rep = nilpotency_probe(quo, g, start, 10)
        assert rep.verdict is Verdict.INCONCLUSIVE and len(rep.chain) == 10
        ladder = quotient_generator_ladder(env, m, 10, js=(5,))
        assert ladder.verdict is Verdict.VERIFIED
        qm = env.qpow(-m[0] * m[1])
        cur, coef = start, Fraction(1)
        for i in range(1, 11):
            cur = act_generator(quo, g, cur)
            coef *= -qm * (5 + i - 1) * (mu + 5 + i)
            assert cur == MVector.monomial(Monomial.var(m, -5 - i), coef)
            assert ladder.chain[i - 1]["coefficient"] == str(coef)


@criterion(8, "twisted single step and its integral zero")
def test_criterion_08_twisted_step():
    rng = sampling.sub_rng(2024, "acceptance-8")
    for _ in range(10):
        env = sampling.env(rng)
        m = sampling.index(rng)
        tw = ModuleSpace.twisted(env, m)
        g = E12((-m[0], -m[1]))
        qm = env.qpow(-m[0] * m[1])
        for j in range(-4, 5):
            want = xm(m, j - 1, env).scale(-(j - env.b) * (j - env.b - 1 - env.mu) * qm)
            assert act_generator(tw, g, xm(m, j, env)) == want
    for j0 in range(-4, 5):
        b = sampling.non_integer(rng)
        env = ParamEnv.make(sampling.rational(rng), j0 - 1 - b, b)
        assert env.mu + env.b + 1 == j0
        m = sampling.index(rng)
        tw = ModuleSpace.twisted(env, m)
        g = E12((-m[0], -m[1]))
        assert act_generator(tw, g, xm(m, j0, env)) == 0
        for j in range(-4, j0):
            assert act_generator(tw, g, xm(m, j, env)) != 0


@criterion(9, "twisted ladder: commutator identity and B_k recursion")
def test_criterion_09_twisted_ladder():
    for point in range(3):
        rng = sampling.sub_rng(2024, "acceptance-9", point)
        env = sampling.env(rng)
        m = sampling.index(rng)
        for d in range(1, 5):
            rep = twisted_ladder_check(env, m, d, 5, seed=point)
            assert rep.verdict is Verdict.VERIFIED, rep.witness


@criterion(10, "span probes: plain mu=0, plain mu=1/2, quotient mu=1/3")
def test_criterion_10_span():
    q = Fraction(3, 2)
    with Budget(30):
        env = ParamEnv.make(q, 0)
        rep = span_probe(parse_vector("x[0,1]"), ModuleSpace.plain(env), 1, 2, MVector.one(), 200)
        assert rep.verdict is Verdict.INCONCLUSIVE and rep.details["min_degree"] >= 1
    with Budget(30):
        env = ParamEnv.make(q, Fraction(1, 2))
        rep = span_probe(parse_vector("x[0,1]^2"), ModuleSpace.plain(env), 1, 2, MVector.one(), 500)
        assert rep.verdict is Verdict.VERIFIED
    with Budget(30):
        env = ParamEnv.make(q, Fraction(1, 3))
        m = (1, 0)
        rep = span_probe(parse_vector("x[1,0]^-1*x[0,1]"), ModuleSpace.quotient(env, m), 1, 2,
                         parse_vector("x[1,0]^-1"), 2000)
        assert rep.verdict is Verdict.VERIFIED


def _cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "ealaloc", *args], capture_output=True, text=True)


@criterion(11, "documented command lines and byte-identical JSON")
def test_criterion_11_cli(tmp_path):
    res = _cli("act", "--space", "twisted", "--q", "2", "--mu", "1/3", "--b", "1/5", "--m", "1,0",
               "--op", "E12(-1,0)", "--vec", "x[1,0]^3")
    want = -(3 - Fraction(1, 5)) * (3 - Fraction(1, 5) - 1 - Fraction(1, 3)) * Fraction(2) ** 0
    assert res.returncode == 0 and res.stdout == f"{want}*x[1,0]^2\n"

    res = _cli("singular", "--mu", "0", "--m", "1,0", "--n", "0,1", "--d", "2", "--q", "3")
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert parse_vector(lines[0].removeprefix("w = ")) == parse_vector(
        "x[1,0]^-3*x[0,1]^2 - 1/3*x[1,0]^-2*x[-1,2]")
    assert lines[1] == "annihilation: verified"

    outs = []
    for k in range(2):
        path = tmp_path / f"run{k}.json"
        res = _cli("verify", "--suite", "all", "--trials", "200", "--seed", "7", "--json", "--out", str(path))
        assert res.returncode == 0, res.stderr
        outs.append((res.stdout, path.read_bytes()))
    assert outs[0] == outs[1]
    assert outs[0][0].encode() == outs[0][1]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
