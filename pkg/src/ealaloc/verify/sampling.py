"""Seeded random parameters, generators and vectors for identity testing."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable

from ..algebra import GENERATOR_KINDS, Atom
from ..fock import GridIndex, ModuleSpace, Monomial, MVector, SpaceKind, project_mod_M
from ..scalar import ParamEnv, is_integer

MAG = 50


def sub_rng(seed: int, *tags: object) -> random.Random:
    """Independent stream for trial ``tags`` under ``seed``; string seeding is
    hash-randomization free, so streams are stable across processes."""
    return random.Random(":".join(map(str, (seed, *tags))))


def rational(rng: random.Random, mag: int = MAG, *, reject: Callable[[Fraction], bool] | None = None) -> Fraction:
    while True:
        num = rng.choice([i for i in range(-mag, mag + 1) if i])
        den = rng.choice([i for i in range(-mag, mag + 1) if i])
        x = Fraction(num, den)
        if reject is None or not reject(x):
            return x


def non_integer(rng: random.Random, mag: int = MAG) -> Fraction:
    return rational(rng, mag, reject=is_integer)


def env(rng: random.Random, *, with_b: bool = True, mu=None, b=None) -> ParamEnv:
    q = rational(rng)
    mu = rational(rng) if mu is None else mu
    if with_b and b is None:
        b = rational(rng)
    return ParamEnv.make(q, mu, b if with_b else None)


def index(rng: random.Random, window: int = 2) -> GridIndex:
    return (rng.randint(-window, window), rng.randint(-window, window))


def index_not(rng: random.Random, avoid: GridIndex, window: int = 2) -> GridIndex:
    while True:
        n = index(rng, window)
        if n != avoid:
            return n


def generator(rng: random.Random, window: int = 2) -> Atom:
    kind = rng.choice(GENERATOR_KINDS)
    if kind in ("D1", "D2"):
        return Atom(kind)
    return Atom(kind, index(rng, window))


def monomial(rng: random.Random, *, window: int = 2, max_degree: int = 3,
             m: GridIndex | None = None, m_range: tuple[int, int] = (-3, 2),
             avoid_m: bool = False) -> Monomial:
    """Random monomial: positive powers of random x_n, and (when ``m`` is
    given and ``avoid_m`` is false) an arbitrary power of x_m."""
    deg = rng.randint(0, max_degree)
    items = []
    for _ in range(deg):
        n = index_not(rng, m, window) if (avoid_m and m is not None) else index(rng, window)
        items.append((n, 1))
    if m is not None and not avoid_m:
        items.append((m, rng.randint(*m_range)))
    return Monomial(items)


def vector(rng: random.Random, space: ModuleSpace, *, terms: int = 3, window: int = 2,
           max_degree: int = 3, coeff_mag: int = 9) -> MVector:
    """Random nonzero vector valid in ``space``."""
    while True:
        out = {}
        for _ in range(rng.randint(1, terms)):
            m = space.m if space.is_localized else None
            mono = monomial(rng, window=window, max_degree=max_degree, m=m)
            out[mono] = out.get(mono, 0) + rational(rng, coeff_mag)
        v = MVector({k: space.env.convert(c) for k, c in out.items()})
        if space.kind is SpaceKind.QUOTIENT:
            v = project_mod_M(v, space.m)
        if v:
            return v
