"""Independent oracles shared by the test modules.

* ``sympy_act``: the realization written directly as sympy differential
  operators, summing over a whole index box rather than over a monomial's
  support, and differentiating with ``sympy.diff``.
* ``matrix_bracket``: commutators of 2x2 matrices over the quantum torus,
  with the torus product implemented from its defining relation.
"""

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, settings

from ealaloc.fock import MVector

settings.register_profile(
    "repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


def xsym(n) -> sympy.Symbol:
    return sympy.Symbol(f"x_{n[0]}_{n[1]}".replace("-", "m"))


def to_sympy(v: MVector) -> sympy.Expr:
    expr = sympy.Integer(0)
    for mono, c in v.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for idx, e in mono:
            term *= xsym(idx) ** e
        expr += term
    return expr


def _box(v: MVector, pad: int) -> list[tuple[int, int]]:
    r = pad
    for mono in v.terms:
        for (a, b), _ in mono:
            r = max(r, abs(a) + pad, abs(b) + pad)
    return [(i, j) for i in range(-r, r + 1) for j in range(-r, r + 1)]


def sympy_act(kind: str, n, v: MVector, q: Fraction, mu: Fraction) -> sympy.Expr:
    """Generator ``kind``(n) applied to ``v`` via the defining formulas."""
    q = sympy.Rational(q.numerator, q.denominator)
    mu = sympy.Rational(mu.numerator, mu.denominator)
    f = to_sympy(v)
    box = _box(v, 1)
    live = [s for s in box if f.has(xsym(s))]
    if kind == "E21":
        return sympy.expand(xsym(n) * f)
    if kind in ("D1", "D2"):
        a = 0 if kind == "D1" else 1
        return sympy.expand(sum((s[a] * xsym(s) * sympy.diff(f, xsym(s)) for s in box), sympy.Integer(0)))
    n1, n2 = n
    if kind == "E11":
        out = mu * f if n == (0, 0) else sympy.Integer(0)
        for s in box:
            out -= q ** (s[1] * n1) * xsym((n1 + s[0], n2 + s[1])) * sympy.diff(f, xsym(s))
        return sympy.expand(out)
    if kind == "E22":
        out = sympy.Integer(0)
        for s in box:
            out += q ** (s[0] * n2) * xsym((n1 + s[0], n2 + s[1])) * sympy.diff(f, xsym(s))
        return sympy.expand(out)
    if kind == "E12":
        out = mu * q ** (-n1 * n2) * sympy.diff(f, xsym((-n1, -n2)))
        for s in live:
            fs = sympy.diff(f, xsym(s))
            for r in live:
                coef = q ** (n2 * r[0] + s[1] * n1 + s[1] * r[0])
                target = (n1 + s[0] + r[0], n2 + s[1] + r[1])
                out -= coef * xsym(target) * sympy.diff(fs, xsym(r))
        return sympy.expand(out)
    raise ValueError(kind)


def same(v: MVector, expr: sympy.Expr) -> bool:
    return sympy.expand(to_sympy(v) - expr) == 0


# -- quantum torus matrices --------------------------------------------------

def qt_mul(a: dict, b: dict, q) -> dict:
    """t^m t^n = q^{m2 n1} t^{m+n}."""
    out: dict = {}
    for m, x in a.items():
        for n, y in b.items():
            k = (m[0] + n[0], m[1] + n[1])
            out[k] = out.get(k, 0) + x * y * q ** (m[1] * n[0])
    return {k: c for k, c in out.items() if c}


def qt_add(a: dict, b: dict, sign=1) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + sign * c
    return {k: c for k, c in out.items() if c}


def unit(kind: str, n) -> list[list[dict]]:
    i, j = int(kind[1]) - 1, int(kind[2]) - 1
    mat = [[{}, {}], [{}, {}]]
    mat[i][j] = {tuple(n): 1}
    return mat


def mat_mul(A, B, q):
    return [[qt_add(qt_mul(A[i][0], B[0][j], q), qt_mul(A[i][1], B[1][j], q)) for j in range(2)]
            for i in range(2)]


def matrix_bracket(g, h, q) -> dict:
    """[g, h] for two matrix generators, as {(kind, n): coeff}."""
    A, B = unit(g.kind, g.n), unit(h.kind, h.n)
    AB, BA = mat_mul(A, B, q), mat_mul(B, A, q)
    out = {}
    for i in range(2):
        for j in range(2):
            for n, c in qt_add(AB[i][j], BA[i][j], -1).items():
                out[(f"E{i + 1}{j + 1}", n)] = c
    return out


@pytest.fixture
def rational_env():
    from ealaloc.scalar import ParamEnv

    return ParamEnv.make("3/2", "1/3", "2/7")


# -- acceptance summary --------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    number = getattr(getattr(item, "function", None), "criterion", None)
    if number is None:
        return
    if rep.when == "call" or (rep.failed and number not in _ACCEPTANCE):
        _ACCEPTANCE[number] = (rep.passed and rep.when == "call", item.function.title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, title = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {title}")
