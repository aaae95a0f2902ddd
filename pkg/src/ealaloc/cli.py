"""Command-line front end.

Every subcommand builds a :class:`ProbeReport`; stdout gets a short human
summary, or the JSON report with ``--json``.  ``--out PATH`` always writes
the JSON report.  Exit codes: 0 verified/success, 1 counterexample,
2 usage or parse error, 3 inconclusive within budget.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .action import NotWeightVectorError, act_element, act_generator, weight_of
from .algebra import E12, MismatchError, NilpotencyBoundError
from .fock import ModuleSpace, SpaceKind, ValidityError, format_vector
from .parsing import ParseError, parse_index, parse_vector, parse_word
from .scalar import ParamEnv, ScalarError, format_scalar, parse_rational
from .verify.constructions import (
    ConstructionError,
    PreconditionError,
    ShapeError,
    cyclicity_run,
    nilpotency_probe,
    singular_vector,
)
from .verify.report import ProbeReport, Stopwatch, Verdict
from .verify.span import span_probe
from .verify.suites import SUITES, identity_suites

__all__ = ["build_parser", "run_command", "main", "EXIT_CODES"]

EXIT_CODES = {
    Verdict.VERIFIED: 0,
    Verdict.COUNTEREXAMPLE: 1,
    Verdict.INCONCLUSIVE: 3,
}
USAGE_ERROR = 2


class UsageError(ValueError):
    pass


def _common(p: argparse.ArgumentParser, *, space: bool = True, vec: bool = True) -> None:
    if space:
        p.add_argument("--space", choices=[k.value for k in SpaceKind], default="plain")
    p.add_argument("--q", default="q", help="rational like 3/2, or the symbol q (default)")
    p.add_argument("--mu", default="mu", help="rational, or the symbol mu (default)")
    p.add_argument("--b", default=None, help="twist parameter; twisted space only")
    p.add_argument("--m", default=None, help="distinguished index M1,M2")
    if vec:
        p.add_argument("--vec", required=True, help='module element, e.g. "x[1,0]^2 - 3/2*x[0,-1]"')
    p.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    p.add_argument("--out", default=None, metavar="PATH", help="write the JSON report to PATH")
    p.add_argument("--timing", action="store_true", help="include runtime_ms in JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ealaloc",
        description="Exact free-field modules for gl_2 over a quantum torus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("act", help="act with an algebra element on a vector")
    _common(p)
    p.add_argument("--op", required=True, help='algebra element, e.g. "E12(0,0)*E21(1,0)"')

    p = sub.add_parser("weights", help="eigenvalues of e11(0), e22(0), d1, d2")
    _common(p)

    p = sub.add_parser("singular", help="build the singular vector in D_m M")
    _common(p, space=False, vec=False)
    p.add_argument("--n", required=True, help="second index N1,N2")
    p.add_argument("--d", required=True, type=int, help="degree in x_n")

    p = sub.add_parser("reduce", help="cyclicity chain in D_m M / M")
    _common(p, space=False)
    p.add_argument("--budget", type=int, default=16, help="maximum reduction steps")

    p = sub.add_parser("probe-span", help="exact span probe for submodule membership")
    _common(p)
    p.add_argument("--target", required=True, help="vector to look for")
    p.add_argument("--window", type=int, default=1, help="generator index window")
    p.add_argument("--degree-cap", type=int, default=2, help="bound on |total degree|")
    p.add_argument("--budget", type=int, default=500, help="maximum span dimension")

    p = sub.add_parser("probe-nilp", help="iterate one generator until the vector dies")
    _common(p)
    p.add_argument("--op", required=True, help="a single generator, e.g. E12(-1,0)")
    p.add_argument("--budget", type=int, default=10, help="maximum iterations")

    p = sub.add_parser("verify", help="seeded randomized identity suites")
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None, metavar="PATH")
    p.add_argument("--timing", action="store_true")
    return parser


def _env(args) -> ParamEnv:
    space = getattr(args, "space", None)
    if args.b is not None and space != "twisted":
        raise UsageError("--b is only meaningful with --space twisted")
    if space == "twisted" and args.b is None:
        raise UsageError("--space twisted needs --b")
    return ParamEnv.make(q=args.q, mu=args.mu, b=args.b)


def _space(args, env: ParamEnv) -> ModuleSpace:
    kind = SpaceKind(args.space)
    if kind is SpaceKind.PLAIN:
        if args.m is not None:
            raise UsageError("--m needs a localized, twisted or quotient space")
        return ModuleSpace.plain(env)
    if args.m is None:
        raise UsageError(f"--space {kind.value} needs --m")
    return ModuleSpace(kind, env, parse_index(args.m))


def _space_params(space: ModuleSpace) -> dict:
    out = {**space.env.params(), "space": space.kind.value}
    if space.m is not None:
        out["m"] = list(space.m)
    return out


def _cmd_act(args) -> tuple[ProbeReport, list[str]]:
    env = _env(args)
    space = _space(args, env)
    v = parse_vector(args.vec, env, space)
    u = parse_word(args.op, env, space.m if space.is_localized else None)
    with Stopwatch() as sw:
        out = act_element(space, u, v)
    text = format_vector(out)
    report = ProbeReport("act", Verdict.VERIFIED, trials=1,
                         params={**_space_params(space), "op": str(u), "vector": format_vector(v)},
                         details={"result": text}, runtime_ms=sw.ms)
    return report, [text]


def _cmd_weights(args) -> tuple[ProbeReport, list[str]]:
    env = _env(args)
    space = _space(args, env)
    v = parse_vector(args.vec, env, space)
    params = {**_space_params(space), "vector": format_vector(v)}
    with Stopwatch() as sw:
        try:
            w = weight_of(space, v)
        except NotWeightVectorError as exc:
            rep = ProbeReport("weights", Verdict.COUNTEREXAMPLE, trials=1, params=params,
                              witness={"generator": str(exc.generator)}, runtime_ms=sw.ms)
            return rep, [str(exc)]
    names = ("e11", "e22", "d1", "d2")
    vals = {k: format_scalar(x) for k, x in zip(names, w.as_tuple())}
    report = ProbeReport("weights", Verdict.VERIFIED, trials=1, params=params,
                         details=vals, runtime_ms=sw.ms)
    return report, [f"{k}: {vals[k]}" for k in names]


def _cmd_singular(args) -> tuple[ProbeReport, list[str]]:
    if args.m is None:
        raise UsageError("singular needs --m")
    env = _env(args)
    try:
        mu = parse_rational(args.mu)
    except ScalarError:
        raise UsageError("singular needs a rational --mu") from None
    if mu.denominator != 1:
        raise PreconditionError(f"mu must be an integer, got {mu}")
    m, n = parse_index(args.m), parse_index(args.n)
    with Stopwatch() as sw:
        w = singular_vector(int(mu), m, n, args.d, env)
        loc = ModuleSpace.localized(env, m)
        image = act_generator(loc, E12((-m[0], -m[1])), w)
    verdict = Verdict.VERIFIED if not image else Verdict.COUNTEREXAMPLE
    report = ProbeReport("singular", verdict, trials=1,
                         params={**env.params(), "m": list(m), "n": list(n), "d": args.d},
                         witness=None if not image else {"image": format_vector(image)},
                         details={"w": format_vector(w)}, runtime_ms=sw.ms)
    status = "verified" if not image else f"FAILED, image {format_vector(image)}"
    return report, [f"w = {format_vector(w)}", f"annihilation: {status}"]


def _cmd_reduce(args) -> tuple[ProbeReport, list[str]]:
    if args.m is None:
        raise UsageError("reduce needs --m")
    env = _env(args)
    m = parse_index(args.m)
    v = parse_vector(args.vec, env, ModuleSpace.quotient(env, m))
    report = cyclicity_run(v, env, m, max_steps=args.budget)
    lines = []
    for entry in report.chain:
        lines.append(f"component of degree {entry['component_degree']}: start {entry['start']}")
        for i, step in enumerate(entry["steps"], 1):
            lines.append(f"  step {i}: index {tuple(step['index'])}, f degree {step['f_degree']}")
        lines.append(f"  end {entry['end']}")
    lines.append(f"verdict: {report.verdict.value} ({report.details['steps']} steps)")
    return report, lines


def _cmd_probe_span(args) -> tuple[ProbeReport, list[str]]:
    env = _env(args)
    space = _space(args, env)
    seed_vec = parse_vector(args.vec, env, space)
    target = parse_vector(args.target, env, space)
    report = span_probe(seed_vec, space, args.window, args.degree_cap, target, args.budget)
    return report, [
        f"dimension: {report.dimension}",
        f"minimum degree reached: {report.details['min_degree']}",
        f"verdict: {report.verdict.value} ({report.details['reason']})",
    ]


def _cmd_probe_nilp(args) -> tuple[ProbeReport, list[str]]:
    env = _env(args)
    space = _space(args, env)
    v = parse_vector(args.vec, env, space)
    u = parse_word(args.op, env, space.m if space.is_localized else None)
    words = list(u.terms)
    if len(words) != 1 or len(words[0]) != 1:
        raise UsageError("--op must be a single generator")
    report = nilpotency_probe(space, words[0][0], v, args.budget)
    lines = [f"iteration {c['iteration']}: {c['terms']} terms, degrees {c['degrees']}" for c in report.chain]
    if "nilpotency_index" in report.details:
        lines.append(f"nilpotent: index {report.details['nilpotency_index']}")
    else:
        lines.append(f"survives {args.budget} iterations: {report.details['survivor']}")
    lines.append(f"verdict: {report.verdict.value}")
    return report, lines


def _cmd_verify(args) -> tuple[ProbeReport, list[str]]:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    report = identity_suites(args.suite, trials=args.trials, seed=args.seed)
    lines = [f"{name}: {n}/{args.trials} trials passed" for name, n in report.details["passed"].items()]
    if report.witness:
        lines.append(f"counterexample: {report.witness}")
    lines.append(f"verdict: {report.verdict.value}")
    return report, lines


COMMANDS = {
    "act": _cmd_act,
    "weights": _cmd_weights,
    "singular": _cmd_singular,
    "reduce": _cmd_reduce,
    "probe-span": _cmd_probe_span,
    "probe-nilp": _cmd_probe_nilp,
    "verify": _cmd_verify,
}


def run_command(argv: Sequence[str], stdout=None, stderr=None) -> int:
    """Parse ``argv``, dispatch, print, and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else 0
    try:
        report, lines = COMMANDS[args.command](args)
    except (ParseError, ValidityError, ScalarError, UsageError, PreconditionError, ShapeError,
            MismatchError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=stderr)
        return USAGE_ERROR
    except (ConstructionError, NilpotencyBoundError) as exc:
        print(f"failed: {exc}", file=stderr)
        return EXIT_CODES[Verdict.COUNTEREXAMPLE]
    text = report.to_json(timing=args.timing)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json:
        stdout.write(text)
    else:
        for line in lines:
            print(line, file=stdout)
    return EXIT_CODES[report.verdict]


def main(argv: Sequence[str] | None = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
