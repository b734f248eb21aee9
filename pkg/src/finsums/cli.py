"""Command-line surface: solve, verify, reduce, pullback, certify, decode,
catalog, number.

Reports on stdout are deterministic (byte-identical across repeated runs
with the same flags); timing goes to stderr.  Exit codes: 0 success/found,
1 not-found or invalid/failed, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .catalog import (
    catalog_nat_colorings,
    catalog_pair_colorings,
    catalog_set_colorings,
    injection_catalog,
)
from .certify import (
    SolveOptions,
    build_decoder,
    certify_step,
    default_ground,
    solve_principle,
    split_carriers,
    verify_principle,
)
from .coloring import Coloring, NAT, PAIR, SET, rule_from_tokens
from .errors import DomainError, FinsumsError
from .fileio import format_coloring, format_solution, parse_coloring, parse_solution
from .numerics import Exactly, ExactlyLarge, parse_length_spec
from .principles import PrincipleId
from .reductions import (
    IN_RANGE,
    INCONCLUSIVE,
    NOT_IN_RANGE,
    STEP_FAMILIES,
    build_step,
    range_decode_eq_a,
    range_decode_exactly_large,
    range_decode_le2,
)
from .coloring import injection_range_contains
from .search import SearchBudget, witness_number

USAGE_ERROR, FAILURE, OK = 2, 1, 0


def _echo(args: argparse.Namespace, command: str) -> None:
    flags = " ".join(
        f"--{k.replace('_', '-')}={v}" for k, v in sorted(vars(args).items())
        if k != "func" and v is not None
    )
    print(f"run {command} {flags}")


def _load_instance(args) -> Coloring:
    if getattr(args, "rule", None):
        arity = getattr(args, "arity", None) or NAT
        colors = args.colors
        return Coloring(arity, colors, rule_from_tokens(args.rule.split()))
    if getattr(args, "infile", None):
        return parse_coloring(Path(args.infile).read_text())
    raise DomainError("need --rule or --in")


def _principle(args) -> PrincipleId:
    family = args.principle
    spec = parse_length_spec(args.len) if args.len else None
    return PrincipleId(
        family,
        args.colors,
        spec=spec,
        dimension=args.dim,
        apartness=args.apart,
    )


def _budget(args) -> SearchBudget:
    return SearchBudget(args.max_exp, args.max_nodes, args.size)


def _options(args) -> SolveOptions:
    carriers = None
    ground = None
    if args.principle in ("IPT", "IPHT"):
        carriers = split_carriers(args.size + 2)
    elif args.principle == "RT":
        ground = default_ground(args.size + 4)
    return SolveOptions(
        budget=_budget(args), ground=ground, carriers=carriers, jobs=args.jobs
    )


def cmd_solve(args) -> int:
    _echo(args, "solve")
    pid = _principle(args)
    instance = _load_instance(args)
    t0 = time.perf_counter()
    out = solve_principle(pid, instance, _options(args))
    print(f"principle {pid.describe()}")
    print(f"status {out.status}")
    print(f"nodes {out.nodes_visited}")
    if out.found:
        rendering = format_solution(out.solution).rstrip("\n")
        for line in rendering.splitlines():
            print(f"solution {line}")
        if args.out:
            Path(args.out).write_text(format_solution(out.solution))
    print(f"time {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return OK if out.found else FAILURE


def cmd_verify(args) -> int:
    _echo(args, "verify")
    pid = _principle(args)
    instance = _load_instance(args)
    solution, claimed = parse_solution(Path(args.solution).read_text())
    report = verify_principle(pid, instance, solution)
    print(f"principle {pid.describe()}")
    print(f"result {report.describe()}")
    if claimed is not None and report.valid and not report.vacuous:
        if claimed != report.color:
            print(f"claimed-color-mismatch claimed={claimed} actual={report.color}")
            return FAILURE
    return OK if report.valid else FAILURE


def _step_from_args(args):
    return build_step(
        args.step,
        spec=parse_length_spec(args.len) if args.len else None,
        target_spec=parse_length_spec(args.target_len) if args.target_len else None,
        colors=args.colors,
        apart=args.apart if args.apart else 2,
        to_base=args.to_base,
    )


def cmd_reduce(args) -> int:
    _echo(args, "reduce")
    step = _step_from_args(args)
    instance = _load_instance(args)
    forward = step.forward(instance)
    print(f"step {step.id}")
    print(f"anchor {step.anchor}")
    print(f"source {step.source.describe()}")
    print(f"target {step.target.describe()}")
    text = format_coloring(forward)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_pullback(args) -> int:
    _echo(args, "pullback")
    step = _step_from_args(args)
    instance = _load_instance(args)
    solution, _claimed = parse_solution(Path(args.solution).read_text())
    back = step.backward(solution, instance)
    report = verify_principle(step.source, instance, back)
    print(f"step {step.id}")
    print(f"anchor {step.anchor}")
    print(f"verify {report.describe()}")
    text = format_solution(back)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return OK if report.valid else FAILURE


def _instances_for(step, count: int):
    family = step.source.family
    if family in ("HT", "IPHT"):
        pool = catalog_nat_colorings(step.source.colors)
    elif family == "FUT":
        pool = catalog_set_colorings(step.source.colors)
    elif family in ("IPT",):
        pool = catalog_pair_colorings(step.source.colors)
    else:
        raise DomainError(f"no instance catalog for family {family}")
    return pool if count < 0 else pool[:count]


def cmd_certify(args) -> int:
    _echo(args, "certify")
    step = _step_from_args(args)
    instances = _instances_for(step, args.count)
    if not instances:
        print("result vacuous (no instances)")
        print("vacuous-pass 1")
        return OK
    pid = step.target
    carriers = split_carriers(args.size + 2) if pid.family in ("IPT", "IPHT") else None
    ground = default_ground(args.size + 4) if pid.family == "RT" else None
    options = SolveOptions(budget=_budget(args), ground=ground, carriers=carriers, jobs=args.jobs)
    t0 = time.perf_counter()
    report = certify_step(step, instances, options)
    print(f"step {step.id}")
    print(f"anchor {step.anchor}")
    print(report.summary())
    print(f"time {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return OK if report.passed else FAILURE


def cmd_decode(args) -> int:
    _echo(args, "decode")
    injections = dict(injection_catalog())
    if args.injection in injections:
        injection = injections[args.injection]
    else:
        injection = rule_from_tokens(args.injection.split())
    if args.mode == "le2":
        from .numerics import AtMost

        spec = AtMost(2)
        decode = range_decode_le2
    elif args.mode == "eq3":
        spec = Exactly(3)
        decode = lambda d, x: range_decode_eq_a(d, x, a=3)
    elif args.mode == "large":
        spec = ExactlyLarge()
        decode = range_decode_exactly_large
    else:
        raise DomainError(f"unknown decode mode {args.mode!r}")
    decoder = build_decoder(injection, spec, _budget(args), jobs=args.jobs)
    if decoder is None:
        print("verdict inconclusive (no monochromatic set found)")
        return OK
    print("members " + " ".join(map(str, decoder.members)))
    print(f"homogeneous-color {decoder.color}")
    verdict = decode(decoder, args.x)
    truth = injection_range_contains(injection, args.x)
    print(f"verdict {verdict}")
    print(f"ground-truth {IN_RANGE if truth else NOT_IN_RANGE}")
    if verdict == INCONCLUSIVE:
        print("agreement n/a")
        return OK
    agree = (verdict == IN_RANGE) == truth
    print(f"agreement {'yes' if agree else 'NO'}")
    return OK if agree else FAILURE


def cmd_catalog(args) -> int:
    _echo(args, "catalog")
    for fam in STEP_FAMILIES:
        if fam.fixture and not args.fixtures:
            continue
        tag = " fixture" if fam.fixture else ""
        print(f"step {fam.id} | params: {fam.params} | {fam.anchor}{tag}")
    return OK


def cmd_number(args) -> int:
    _echo(args, "number")
    spec = parse_length_spec(args.len)
    n = witness_number(spec, args.colors, args.size, args.apart or 2, max_n=args.max_n)
    print(f"witness-number {n}")
    return OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finsums",
        description="Finite-sums principles: verifiers, reductions, search, decoders.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, principle=False, step=False, budget=True):
        if principle:
            p.add_argument("--principle", choices=["HT", "FUT", "RT", "IPT", "IPHT"], default="HT")
            p.add_argument("--len", help="length spec: <=n, =n, {a,b}, !w")
            p.add_argument("--dim", type=int, help="dimension for RT/IPT/IPHT")
        if step:
            p.add_argument("--step", required=True, help="reduction id from `catalog`")
            p.add_argument("--len", help="source length spec")
            p.add_argument("--target-len", dest="target_len", help="target length spec")
            p.add_argument("--to-base", dest="to_base", type=int, default=2)
        p.add_argument("--colors", type=int, default=2)
        p.add_argument("--apart", type=int, help="apartness base t")
        p.add_argument("--rule", help="rule tokens, e.g. 'mod 2 0 1'")
        p.add_argument("--arity", choices=[NAT, PAIR, "triple", SET])
        p.add_argument("--in", dest="infile", help="instance file")
        p.add_argument("--out", help="output file")
        if budget:
            p.add_argument("--size", type=int, default=4)
            p.add_argument("--max-exp", dest="max_exp", type=int, default=16)
            p.add_argument("--max-nodes", dest="max_nodes", type=int, default=20000)
            p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("solve", help="search a witness for a principle instance")
    common(p, principle=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="verify a solution against an instance")
    common(p, principle=True, budget=False)
    p.add_argument("--solution", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="apply a reduction's instance-forward map")
    common(p, step=True, budget=False)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("pullback", help="apply a reduction's solution-backward map and auto-verify")
    common(p, step=True, budget=False)
    p.add_argument("--solution", required=True, help="target-side solution file")
    p.set_defaults(func=cmd_pullback)

    p = sub.add_parser("certify", help="forward-solve-backward-verify over catalog instances")
    common(p, step=True)
    p.add_argument("--count", type=int, default=-1,
                   help="limit the instance count (-1 = all; 0 = vacuous sweep)")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("decode", help="run a range decoder against ground truth")
    p.add_argument("--mode", choices=["le2", "eq3", "large"], required=True)
    p.add_argument("--injection", required=True, help="catalog name or rule tokens")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--size", type=int, default=12)
    p.add_argument("--max-exp", dest="max_exp", type=int, default=18)
    p.add_argument("--max-nodes", dest="max_nodes", type=int, default=100000)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("catalog", help="list the reduction catalog")
    p.add_argument("--fixtures", action="store_true", help="include negative-control fixtures")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("number", help="compute a finite witness number")
    p.add_argument("--len", required=True)
    p.add_argument("--colors", type=int, default=2)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--apart", type=int, default=2)
    p.add_argument("--max-n", dest="max_n", type=int, default=40)
    p.set_defaults(func=cmd_number)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code else OK
    try:
        return args.func(args)
    except FinsumsError as exc:
        print(f"error {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
