"""Exact span computations: a sparse reduced row-echelon basis and a
breadth-first submodule closure under a finite window of generators."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator

from ..action import act_generator
from ..algebra import GENERATOR_KINDS, Atom
from ..fock import ModuleSpace, Monomial, MVector, SpaceKind, format_vector, project_mod_M
from .report import ProbeReport, Stopwatch, Verdict

__all__ = ["SpanBasis", "span_probe", "window_generators"]


class SpanBasis:
    """Fully reduced row-echelon basis over the coefficient field.

    Each row has coefficient 1 at its pivot monomial and 0 at every other
    pivot, so reducing a vector is a single pass over its pivot monomials.
    """

    def __init__(self, vectors: Iterable[MVector] = ()):
        self.rows: dict[Monomial, MVector] = {}
        for v in vectors:
            self.insert(v)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[Monomial]:
        return sorted(self.rows)

    def __iter__(self) -> Iterator[MVector]:
        return (self.rows[p] for p in self.pivots())

    def reduce(self, v: MVector) -> MVector:
        out = v
        for mono in [mm for mm in v.terms if mm in self.rows]:
            c = out[mono]
            if c:
                out = out - self.rows[mono].scale(c)
        return out

    def contains(self, v: MVector) -> bool:
        return not self.reduce(v)

    def insert(self, v: MVector) -> bool:
        """Add ``v``; return True when the dimension grew."""
        r = self.reduce(v)
        if not r:
            return False
        pivot = max(r.terms)
        r = r.scale(1 / r[pivot])
        for p, row in list(self.rows.items()):
            c = row[pivot]
            if c:
                self.rows[p] = row - r.scale(c)
        self.rows[pivot] = r
        return True


def window_generators(window: int) -> list[Atom]:
    """All generators with index in the box |n1|, |n2| <= window; lowering
    operators first so short chains are explored early."""
    idx = [(i, j) for i in range(-window, window + 1) for j in range(-window, window + 1)]
    out = [Atom(kind, n) for kind in ("E12", "E11", "E22", "E21") for n in idx]
    out += [Atom("D1"), Atom("D2")]
    assert {a.kind for a in out} == set(GENERATOR_KINDS)
    return out


def _support_radius(vs: Iterable[MVector]) -> int:
    r = 0
    for v in vs:
        for mono in v.terms:
            for (a, b), _ in mono:
                r = max(r, abs(a), abs(b))
    return r


def span_probe(seed_vec: MVector, space: ModuleSpace, gen_window: int, degree_cap: int,
               target: MVector, max_dim: int, *, abs_degree_cap: int | None = None,
               support_window: int | None = None) -> ProbeReport:
    """Grow U(g)·seed inside a finite box and ask whether ``target`` lands in it.

    A generated vector is kept only if every monomial has total degree in
    [-degree_cap, degree_cap], absolute degree sum|k| <= abs_degree_cap and
    indices inside the support window.  Vectors that leave the box are
    discarded whole, so every basis vector is a genuine element of the
    submodule: membership is a certificate, non-membership only evidence.
    """
    if abs_degree_cap is None:
        abs_degree_cap = 3 * degree_cap
    if support_window is None:
        support_window = max(2 * gen_window, _support_radius([seed_vec, target]))
    if space.kind is SpaceKind.QUOTIENT:
        seed_vec = project_mod_M(seed_vec, space.m)
        target = project_mod_M(target, space.m)

    def inside(v: MVector) -> bool:
        for mono in v.terms:
            if abs(mono.degree) > degree_cap:
                return False
            if sum(abs(e) for _, e in mono) > abs_degree_cap:
                return False
            for (a, b), _ in mono:
                if abs(a) > support_window or abs(b) > support_window:
                    return False
        return True

    gens = window_generators(gen_window)
    basis = SpanBasis()
    params = {
        **space.env.params(),
        "space": space.kind.value,
        "seed": format_vector(seed_vec),
        "target": format_vector(target),
        "gen_window": gen_window,
        "degree_cap": degree_cap,
        "abs_degree_cap": abs_degree_cap,
        "support_window": support_window,
        "max_dim": max_dim,
    }
    if space.m is not None:
        params["m"] = list(space.m)
    verdict = Verdict.INCONCLUSIVE
    reason = "closure exhausted"
    applications = 0
    with Stopwatch() as sw:
        queue: deque[MVector] = deque()
        if seed_vec and inside(seed_vec):
            basis.insert(seed_vec)
            queue.append(seed_vec)
        if basis.contains(target):
            verdict = Verdict.VERIFIED
        while queue and verdict is Verdict.INCONCLUSIVE:
            v = queue.popleft()
            for g in gens:
                w = act_generator(space, g, v, check=False)
                applications += 1
                if not w or not inside(w):
                    continue
                if basis.insert(w):
                    queue.append(w)
                    if basis.contains(target):
                        verdict = Verdict.VERIFIED
                        break
                    if basis.dimension >= max_dim:
                        reason = "max_dim reached"
                        break
            if reason == "max_dim reached":
                break
    min_degree = min((mono.degree for row in basis for mono in row.terms), default=None)
    details = {"reason": reason if verdict is Verdict.INCONCLUSIVE else "target reached",
               "applications": applications, "min_degree": min_degree}
    return ProbeReport("span", verdict, trials=applications, params=params,
                       dimension=basis.dimension, details=details, runtime_ms=sw.ms)
