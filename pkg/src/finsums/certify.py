"""Forward-solve-backward-verify driver: the certification law.

For a reduction step R and a source instance I, solve the target instance
R.forward(I) with the search engines, pull the solution back, and verify
it against I.  A backward error or an invalid pullback is a certification
failure; instances whose target search comes up empty are skipped counts,
never silent passes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .coloring import Coloring, Derived, NAT, Rule
from .errors import DomainError, FinsumsError
from .numerics import (
    ApartSet,
    ExactlyLarge,
    ExistsPair,
    FiniteSet,
    exactly_large_subsets,
)
from .principles import (
    PrincipleId,
    VerificationReport,
    verify_fut,
    verify_ht,
    verify_ipt,
    verify_polarized_ht,
    verify_rt,
)
from .reductions import (
    ExistsPairSolution,
    RangeDecoder,
    ReductionStep,
    fut_from_ht,
    important_parity_coloring,
)
from .search import (
    SearchBudget,
    SearchOutcome,
    search_apart_homogeneous,
    search_increasing_polarized,
    search_tuple_homogeneous,
)


@dataclass(frozen=True)
class SolveOptions:
    budget: SearchBudget
    ground: tuple[int, ...] | None = None
    carriers: tuple[tuple[int, ...], ...] | None = None
    jobs: int = 1
    prune: bool = True
    powers_only: bool = False


def default_ground(size: int, t: int = 2) -> tuple[int, ...]:
    """The least t-apart ground set: consecutive powers of t."""
    return tuple(t**i for i in range(size))


def split_carriers(size_per_side: int, t: int = 2) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two disjoint sets with apart union: alternating powers of t."""
    pool = default_ground(2 * size_per_side, t)
    return pool[0::2], pool[1::2]


def solve_principle(pid: PrincipleId, instance: Coloring, options: SolveOptions) -> SearchOutcome:
    """Run the search engine matching the principle family."""
    if pid.family == "HT":
        t = pid.apartness if pid.apartness is not None else 2
        return search_apart_homogeneous(
            instance,
            pid.spec,
            t,
            options.budget,
            prune=options.prune,
            jobs=options.jobs,
            powers_only=options.powers_only,
        )
    if pid.family == "FUT":
        # solve finite unions through the support pullback: an apart
        # solution's exponent blocks form the block sequence
        bridge = fut_from_ht(pid.spec, pid.colors, 2)
        nat_instance = bridge.forward(instance)
        out = search_apart_homogeneous(
            nat_instance,
            pid.spec,
            2,
            options.budget,
            prune=options.prune,
            jobs=options.jobs,
            powers_only=options.powers_only,
        )
        if not out.found:
            return out
        blocks = bridge.backward(out.solution, instance)
        rep = verify_fut(instance, pid.spec, blocks)
        if not rep.valid:
            raise AssertionError(f"FUT bridge produced an invalid block sequence: {rep.describe()}")
        return SearchOutcome(out.status, blocks, out.nodes_visited)
    if pid.family == "RT":
        if isinstance(pid.spec, ExactlyLarge):
            return _solve_rt_exactly_large(pid, instance, options)
        ground = options.ground or default_ground(options.budget.target_size + 4)
        return search_tuple_homogeneous(
            instance, pid.dimension, ground, options.budget.target_size, prune=options.prune
        )
    if pid.family == "IPT":
        carriers = options.carriers or split_carriers(options.budget.target_size + 2)
        return search_increasing_polarized(
            instance, pid.dimension, carriers, options.budget.target_size
        )
    if pid.family == "IPHT":
        from .coloring import compose_coloring

        pair_view = compose_coloring("tuple-sum", (), instance, "pair", instance.colors)
        carriers = options.carriers or split_carriers(options.budget.target_size + 2)
        out = search_increasing_polarized(
            pair_view, pid.dimension, carriers, options.budget.target_size
        )
        if out.found:
            rep = verify_polarized_ht(
                instance,
                pid.dimension,
                [tuple(p) for p in out.solution.parts],
                increasing=True,
                apart_base=pid.apartness,
            )
            if not rep.valid:
                raise AssertionError(f"IPHT solve produced an invalid solution: {rep.describe()}")
        return out
    raise DomainError(f"no solver for family {pid.family}")


def _solve_rt_exactly_large(pid: PrincipleId, instance: Coloring, options: SolveOptions) -> SearchOutcome:
    """Ramsey for exactly large sets, for sum-form instances: c(S) = f(sum S)
    reduces the search to the exactly-large-sums engine on f."""
    inner = _unwrap_sum_rule(instance)
    if inner is None:
        raise DomainError("exactly-large-set Ramsey solve supports sum-form instances only")
    out = search_apart_homogeneous(
        inner, ExactlyLarge(), 2, options.budget, prune=options.prune, jobs=options.jobs
    )
    if out.found:
        sol = FiniteSet(out.solution.members)
        return SearchOutcome(out.status, sol, out.nodes_visited)
    return out


def _unwrap_sum_rule(instance: Coloring) -> Coloring | None:
    body = instance.body
    if isinstance(body, Rule) and body.name == "sum-rule":
        return Coloring(NAT, instance.colors, body.subs[0])
    if isinstance(body, Derived) and body.kind == "sum-rule":
        return body.inner
    return None


def build_decoder(
    injection: Rule,
    spec,
    budget: SearchBudget,
    t: int = 2,
    jobs: int = 1,
) -> RangeDecoder | None:
    """Search a monochromatic apart set for the injection's important-parity
    coloring and wrap it as a decoder; None when the search comes up empty.

    The cheap single-power candidate tier is tried first (long runs of
    pure powers decide many queries), then the full candidate order."""
    parity = important_parity_coloring(injection)
    out = search_apart_homogeneous(parity, spec, t, budget, jobs=jobs, powers_only=True)
    if not out.found:
        out = search_apart_homogeneous(parity, spec, t, budget, jobs=jobs)
    if not out.found:
        return None
    rep = verify_ht(parity, spec, out.solution, apart_base=t)
    return RangeDecoder(
        injection=injection,
        spec=spec,
        members=out.solution.members,
        color=rep.color,
        base=t,
    )


def verify_principle(pid: PrincipleId, instance: Coloring, solution) -> VerificationReport:
    """Dispatch to the verifier matching the principle family and shape."""
    if pid.family == "HT":
        if isinstance(pid.spec, ExistsPair):
            if not isinstance(solution, ExistsPairSolution):
                raise DomainError("this principle needs a set plus a pair of lengths")
            return verify_ht(instance, solution.spec(), solution.members, apart_base=pid.apartness)
        return verify_ht(instance, pid.spec, solution, apart_base=pid.apartness)
    if pid.family == "FUT":
        return verify_fut(instance, pid.spec, solution)
    if pid.family == "RT":
        if isinstance(pid.spec, ExactlyLarge):
            return _verify_rt_exactly_large(instance, solution)
        return verify_rt(instance, pid.dimension, solution)
    if pid.family == "IPT":
        return verify_ipt(instance, pid.dimension, [tuple(p) for p in solution.parts])
    if pid.family in ("IPHT", "PHT"):
        return verify_polarized_ht(
            instance,
            pid.dimension,
            [tuple(p) for p in solution.parts],
            increasing=pid.family == "IPHT",
            apart_base=pid.apartness,
        )
    raise DomainError(f"no verifier for family {pid.family}")


def _verify_rt_exactly_large(c: Coloring, solution) -> VerificationReport:
    from .principles import Clash

    members = tuple(solution.members) if isinstance(solution, ApartSet) else tuple(solution)
    fn = c.compiled()
    first = None
    first_color = None
    for subset in exactly_large_subsets(members):
        col = fn(subset)
        if first is None:
            first, first_color = subset, col
        elif col != first_color:
            return VerificationReport(
                valid=False, witness=Clash("set", first, first_color, subset, col)
            )
    if first is None:
        return VerificationReport(valid=True, vacuous=True)
    return VerificationReport(valid=True, color=first_color)


# ---------------------------------------------------------------------------
# the sweep


@dataclass(frozen=True)
class CertRow:
    index: int
    found: bool
    valid: bool | None = None
    vacuous: bool = False
    source_color: int | None = None
    target_color: int | None = None
    error: str | None = None


@dataclass
class CertReport:
    step_id: str
    anchor: str
    rows: list[CertRow] = field(default_factory=list)

    @property
    def attempted(self) -> int:
        return len(self.rows)

    @property
    def found(self) -> int:
        return sum(r.found for r in self.rows)

    @property
    def failures(self) -> list[CertRow]:
        return [r for r in self.rows if r.found and (r.error is not None or r.valid is False)]

    @property
    def vacuous(self) -> int:
        return sum(r.vacuous for r in self.rows)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        head = (
            f"certify {self.step_id}: {self.found}/{self.attempted} solved, "
            f"{len(self.failures)} failed, {self.vacuous} vacuous"
        )
        if self.failures:
            first = self.failures[0]
            head += f"\nfirst counterexample: instance {first.index}: {first.error or 'invalid pullback'}"
        return head


@dataclass(frozen=True)
class SuiteEntry:
    label: str
    step: ReductionStep
    instances: tuple[Coloring, ...]
    options: SolveOptions
    check_color_transport: bool = False


def certification_suite(per_step: int = 8) -> list[SuiteEntry]:
    """The curated demo sweep: every catalog reduction family, run on a
    slice of the instance catalogs with budgets known to find witnesses."""
    from .catalog import catalog_nat_colorings, catalog_pair_colorings, catalog_set_colorings
    from .coloring import constant
    from .numerics import AtMost
    from .reductions import (
        apartness_base_convert,
        color_doubling,
        divide_sum_reduction,
        exists_pair_from_rt3,
        fut_from_ht,
        ht_exact_from_rt,
        ht_from_fut,
        ht_large_from_rt_large,
        ipht_from_ht_large,
        ipht_from_ipt,
        ipt_from_ht_eq2,
        ipt_from_ipht,
    )

    nat = tuple(catalog_nat_colorings(2)[:per_step])
    sets = tuple(catalog_set_colorings(2)[:per_step])
    pairs = tuple(catalog_pair_colorings(2)[:per_step])
    consts = (constant(0, colors=2), constant(1, colors=2))
    carriers5 = tuple(FiniteSet(c) for c in split_carriers(5))
    B = SearchBudget
    entries = [
        SuiteEntry("fut-from-ht[t=2]", fut_from_ht(AtMost(2), 2, 2), sets, SolveOptions(B(12, 60_000, 4))),
        SuiteEntry("fut-from-ht[t=3]", fut_from_ht(AtMost(2), 2, 3), sets, SolveOptions(B(7, 40_000, 4))),
        SuiteEntry("ht-from-fut[t=2]", ht_from_fut(AtMost(2), 2, 2), nat, SolveOptions(B(12, 60_000, 4))),
        SuiteEntry("ht-from-fut[t=3]", ht_from_fut(AtMost(2), 2, 3), nat, SolveOptions(B(12, 60_000, 4))),
        SuiteEntry("apart-convert[3->2]", apartness_base_convert(AtMost(2), 2, 3, 2), nat, SolveOptions(B(7, 40_000, 4))),
        SuiteEntry("color-doubling[n=2,k=2]", color_doubling(2, 2), nat, SolveOptions(B(14, 120_000, 4))),
        SuiteEntry("ht-exact-from-rt[n=2]", ht_exact_from_rt(2, 2), nat, SolveOptions(B(16, 40_000, 4), ground=default_ground(10))),
        SuiteEntry("ipt-from-ht-eq2", ipt_from_ht_eq2(), pairs, SolveOptions(B(16, 40_000, 5)), check_color_transport=True),
        SuiteEntry("divide-sum[2|4]", divide_sum_reduction(2, 4, 2), nat, SolveOptions(B(9, 120_000, 8))),
        SuiteEntry("ipht-from-ipt", ipht_from_ipt(carriers5), nat, SolveOptions(B(16, 40_000, 3), carriers=carriers5), check_color_transport=True),
        SuiteEntry("ipt-from-ipht", ipt_from_ipht(), pairs, SolveOptions(B(16, 40_000, 3), carriers=split_carriers(5)), check_color_transport=True),
        SuiteEntry("ipht-from-ht-large", ipht_from_ht_large(), consts, SolveOptions(B(10, 60_000, 7))),
        SuiteEntry("exists-pair-from-rt3", exists_pair_from_rt3(), nat, SolveOptions(B(16, 40_000, 5), ground=default_ground(10))),
        SuiteEntry("ht-large-from-rt-large", ht_large_from_rt_large(), consts, SolveOptions(B(10, 60_000, 6))),
    ]
    return entries


def certify_step(
    step: ReductionStep,
    instances: Sequence[Coloring],
    options: SolveOptions,
    *,
    check_color_transport: bool = False,
) -> CertReport:
    report = CertReport(step_id=step.id, anchor=step.anchor)
    for idx, inst in enumerate(instances):
        report.rows.append(
            _certify_one(step, idx, inst, options, check_color_transport)
        )
    return report


def _certify_one(
    step: ReductionStep,
    idx: int,
    inst: Coloring,
    options: SolveOptions,
    check_color_transport: bool,
) -> CertRow:
    target_inst = step.forward(inst)
    out = solve_principle(step.target, target_inst, options)
    if not out.found:
        return CertRow(index=idx, found=False)
    target_rep = verify_principle(step.target, target_inst, out.solution)
    try:
        back = step.backward(out.solution, inst)
        rep = verify_principle(step.source, inst, back)
    except FinsumsError as exc:
        return CertRow(index=idx, found=True, error=f"{type(exc).__name__}: {exc}")
    row = CertRow(
        index=idx,
        found=True,
        valid=rep.valid,
        vacuous=rep.vacuous,
        source_color=rep.color,
        target_color=target_rep.color,
    )
    if rep.valid and check_color_transport and not rep.vacuous and not target_rep.vacuous:
        if rep.color != target_rep.color:
            row = CertRow(
                index=idx,
                found=True,
                valid=False,
                source_color=rep.color,
                target_color=target_rep.color,
                error=f"color transport broke: target {target_rep.color}, source {rep.color}",
            )
    return row
