"""Strong computable reductions as executable (forward, backward) pairs,
plus the range decoders that extract injection-range information from
monochromatic apart sets.

forward maps an instance (a coloring) of the source principle to an
instance of the target principle; backward maps any solution of that
target instance back to a solution of the original source instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .coloring import (
    Coloring,
    NAT,
    PAIR,
    Rule,
    SET,
    TRIPLE,
    compile_injection,
    compose_coloring,
    is_injection_rule,
)
from .errors import (
    ChunkError,
    CompositionError,
    DomainError,
    InterleaveError,
    ThinningError,
)
from .numerics import (
    ApartSet,
    AtMost,
    BlockSequence,
    Exactly,
    ExactlyLarge,
    ExistsPair,
    ExplicitLengths,
    FiniteSet,
    LengthSpec,
    U64_MAX,
    encode_set,
    greatest_exponent,
    is_exactly_large,
    least_exponent,
    support_set,
)
from .principles import PolarizedSets, PrincipleId, verify_ht


@dataclass(frozen=True)
class ReductionStep:
    """A strong computable reduction: source <=sc target."""

    id: str
    source: PrincipleId
    target: PrincipleId
    forward: Callable[[Coloring], Coloring]
    backward: Callable
    anchor: str
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.provenance:
            object.__setattr__(self, "provenance", (self.id,))


def _members(solution) -> tuple[int, ...]:
    if isinstance(solution, ApartSet):
        return solution.members
    return tuple(sorted(solution))


# ---------------------------------------------------------------------------
# finite sums <-> finite unions


def fut_from_ht(spec: LengthSpec, k: int, t: int) -> ReductionStep:
    """FUT^spec_k reduces to HT^spec_k with t-apartness: color m as the
    set coloring colors m's base-t exponent set; pull an apart set back
    to its support blocks."""

    def forward(c: Coloring) -> Coloring:
        if c.arity != SET:
            raise DomainError("expected a set coloring")
        return compose_coloring("support", (t,), c, NAT, k)

    def backward(solution, _c: Coloring) -> BlockSequence:
        return BlockSequence([support_set(h, t) for h in _members(solution)])

    return ReductionStep(
        id=f"fut-from-ht[{t}]",
        source=PrincipleId("FUT", k, spec=spec),
        target=PrincipleId("HT", k, spec=spec, apartness=t),
        forward=forward,
        backward=backward,
        anchor=f"FUT^spec_k <=sc HT^spec_k with {t}-apartness",
    )


def ht_from_fut(spec: LengthSpec, k: int, t: int) -> ReductionStep:
    """HT^spec_k with t-apartness reduces to FUT^spec_k: color a finite
    set S as the nat coloring colors sum of t**s over S; pull a block
    sequence back to the apart set of its encoded blocks."""

    def forward(d: Coloring) -> Coloring:
        if d.arity != NAT:
            raise DomainError("expected a coloring of naturals")
        return compose_coloring("encode", (t,), d, SET, k)

    def backward(blocks, _d: Coloring) -> ApartSet:
        if not isinstance(blocks, BlockSequence):
            blocks = BlockSequence(blocks)
        return ApartSet(t, tuple(encode_set(b, t) for b in blocks))

    return ReductionStep(
        id=f"ht-from-fut[{t}]",
        source=PrincipleId("HT", k, spec=spec, apartness=t),
        target=PrincipleId("FUT", k, spec=spec),
        forward=forward,
        backward=backward,
        anchor=f"HT^spec_k with {t}-apartness <=sc FUT^spec_k",
    )


def apartness_base_convert(spec: LengthSpec, k: int, t: int, s: int) -> ReductionStep:
    """Base change: a t-apart solution framework converts to an s-apart
    one by passing through finite unions."""
    step = compose(ht_from_fut(spec, k, s), fut_from_ht(spec, k, t))
    return ReductionStep(
        id=f"apart-convert[{t}->{s}]",
        source=step.source,
        target=step.target,
        forward=step.forward,
        backward=step.backward,
        anchor=f"HT with {s}-apartness <=sc HT with {t}-apartness, via FUT",
        provenance=step.provenance,
    )


# ---------------------------------------------------------------------------
# color doubling and thinning


def color_doubling(n: int, k: int) -> ReductionStep:
    """HT^{<=n}_k with 3-apartness reduces to HT^{<=n}_{2k}: split every
    color class by the base-3 least coefficient; thin any doubled-coloring
    solution to a 3-apart subset.

    Thinning asserts that no two members share a base-3 least exponent
    (which genuine monochromaticity forces for n >= 2); a violation
    raises ThinningError rather than repairing the set.
    """
    if n < 2 or k < 1:
        raise DomainError("color doubling needs n >= 2, k >= 1")

    def forward(f: Coloring) -> Coloring:
        if f.arity != NAT:
            raise DomainError("expected a coloring of naturals")
        return compose_coloring("double", (k,), f, NAT, 2 * k)

    def backward(solution, _f: Coloring) -> ApartSet:
        members = _members(solution)
        by_lambda: dict[int, int] = {}
        for h in members:
            lam = least_exponent(h, 3)
            if lam in by_lambda:
                raise ThinningError(
                    f"members {by_lambda[lam]} and {h} share base-3 least exponent {lam}; "
                    "the input set cannot be monochromatic for the doubled coloring"
                )
            by_lambda[lam] = h
        kept = [members[0]]
        for h in members[1:]:
            if least_exponent(h, 3) > greatest_exponent(kept[-1], 3):
                kept.append(h)
        return ApartSet(3, tuple(kept))

    return ReductionStep(
        id=f"color-doubling[n={n},k={k}]",
        source=PrincipleId("HT", k, spec=AtMost(n), apartness=3),
        target=PrincipleId("HT", 2 * k, spec=AtMost(n)),
        forward=forward,
        backward=backward,
        anchor=f"HT^{{<={n}}}_{k} with apartness <=sc HT^{{<={n}}}_{2 * k}",
    )


# ---------------------------------------------------------------------------
# Ramsey upper bounds


def ht_exact_from_rt(n: int, k: int, t: int = 2) -> ReductionStep:
    """HT^{=n}_k with apartness reduces to RT^n_k: color an increasing
    tuple by the color of its sum, run Ramsey over an apart ground set."""
    if n not in (2, 3):
        raise DomainError("tuple dimensions 2 and 3 are supported")

    def forward(f: Coloring) -> Coloring:
        if f.arity != NAT:
            raise DomainError("expected a coloring of naturals")
        return compose_coloring("tuple-sum", (), f, PAIR if n == 2 else TRIPLE, k)

    def backward(solution, _f: Coloring) -> ApartSet:
        return ApartSet(t, _members(solution))

    return ReductionStep(
        id=f"ht-exact-from-rt[n={n}]",
        source=PrincipleId("HT", k, spec=Exactly(n), apartness=t),
        target=PrincipleId("RT", k, dimension=n),
        forward=forward,
        backward=backward,
        anchor=f"HT^{{={n}}}_{k} with apartness <=sc RT^{n}_{k}",
    )


def exists_pair_from_rt3(t: int = 2) -> ReductionStep:
    """HT with some monochromatic pair of sum lengths a < b reduces to
    RT^3_8: color triples by the bit-triple of prefix sums; pigeonhole
    two equal bits out of three."""

    def forward(f: Coloring) -> Coloring:
        if f.arity != NAT or f.colors != 2:
            raise DomainError("expected a 2-coloring of naturals")
        return compose_coloring("prefix-bits", (), f, TRIPLE, 8)

    def backward(solution, f: Coloring) -> "ExistsPairSolution":
        members = _members(solution)
        if len(members) < 3:
            raise DomainError("need at least 3 members to read off the bit-triple")
        fn = f.compiled()
        x1, x2, x3 = members[:3]
        bits = (fn(x1), fn(x1 + x2), fn(x1 + x2 + x3))
        for a, b in ((1, 2), (1, 3), (2, 3)):
            if bits[a - 1] == bits[b - 1]:
                return ExistsPairSolution(ApartSet(t, members), (a, b))
        raise AssertionError("pigeonhole cannot fail on 2 values among 3")

    return ReductionStep(
        id="exists-pair-from-rt3",
        source=PrincipleId("HT", 2, spec=ExistsPair(), apartness=t),
        target=PrincipleId("RT", 8, dimension=3),
        forward=forward,
        backward=backward,
        anchor="HT^{?{a<b}}_2 with apartness <=sc RT^3_8",
    )


@dataclass(frozen=True)
class ExistsPairSolution:
    """An apart set together with the sum lengths a < b it certifies."""

    members: ApartSet
    lengths: tuple[int, int]

    def spec(self) -> ExplicitLengths:
        return ExplicitLengths(self.lengths)


def ht_large_from_rt_large(t: int = 2) -> ReductionStep:
    """Exactly-large-sums Hindman with apartness reduces to Ramsey for
    exactly large sets: color an exactly large set by the color of its sum."""

    def forward(f: Coloring) -> Coloring:
        if f.arity != NAT:
            raise DomainError("expected a coloring of naturals")
        return compose_coloring("sum-rule", (), f, SET, f.colors)

    def backward(solution, _f: Coloring) -> ApartSet:
        return ApartSet(t, _members(solution))

    return ReductionStep(
        id="ht-large-from-rt-large",
        source=PrincipleId("HT", 2, spec=ExactlyLarge(), apartness=t),
        target=PrincipleId("RT", 2, spec=ExactlyLarge()),
        forward=forward,
        backward=backward,
        anchor="HT^{!w}_2 with apartness <=sc RT^{!w}_2",
    )


# ---------------------------------------------------------------------------
# polarized principles


def ipt_from_ht_eq2(min_per_side: int = 2) -> ReductionStep:
    """IPT^2_2 reduces to HT^{=2}_2 with apartness: powers of two get
    color 0, everything else the pair color of its extreme exponents;
    split an apart solution into odd-position least exponents and
    even-position greatest exponents."""

    def forward(c: Coloring) -> Coloring:
        if c.arity != PAIR:
            raise DomainError("expected a coloring of increasing pairs")
        return compose_coloring("pair-encode", (), c, NAT, max(2, c.colors))

    def backward(solution, _c: Coloring) -> PolarizedSets:
        members = list(_members(solution))
        while members and least_exponent(members[0], 2) == 0:
            members.pop(0)  # ensure 0 < lambda(h_1)
        if len(members) < 2 * min_per_side:
            raise DomainError(
                f"need {2 * min_per_side} members after the prefix drop, got {len(members)}"
            )
        h1 = FiniteSet(least_exponent(h, 2) for h in members[0::2])
        h2 = FiniteSet(greatest_exponent(h, 2) for h in members[1::2])
        return PolarizedSets((h1, h2))

    return ReductionStep(
        id="ipt-from-ht-eq2",
        source=PrincipleId("IPT", 2, dimension=2),
        target=PrincipleId("HT", 2, spec=Exactly(2), apartness=2),
        forward=forward,
        backward=backward,
        anchor="IPT^2_2 <=sc HT^{=2}_2 with apartness",
    )


def ipht_from_ipt(carriers: tuple[FiniteSet, FiniteSet], t: int = 2) -> ReductionStep:
    """IPHT^2_2 with apartness follows from IPT^2_2 relativized to two
    disjoint carrier sets whose union is apart: color a pair by the color
    of its sum.  The carrier parameter is the finite-scale stand-in for
    the relativization; identity backward plus an apartness re-check."""
    s1, s2 = FiniteSet(carriers[0]), FiniteSet(carriers[1])
    if set(s1) & set(s2):
        raise DomainError("carriers must be disjoint")
    ApartSet(t, tuple(sorted(set(s1) | set(s2))))  # validates the union

    def forward(f: Coloring) -> Coloring:
        if f.arity != NAT:
            raise DomainError("expected a coloring of naturals")
        return compose_coloring("tuple-sum", (), f, PAIR, f.colors)

    def backward(solution, _f: Coloring) -> PolarizedSets:
        if not isinstance(solution, PolarizedSets) or len(solution.parts) != 2:
            raise DomainError("expected a polarized pair solution")
        p1, p2 = solution.parts
        if not (set(p1) <= set(s1) and set(p2) <= set(s2)):
            raise DomainError("solution leaves the declared carriers")
        ApartSet(t, tuple(sorted(set(p1) | set(p2))))  # re-check apartness
        return solution

    return ReductionStep(
        id="ipht-from-ipt",
        source=PrincipleId("IPHT", 2, dimension=2, apartness=t),
        target=PrincipleId("IPT", 2, dimension=2),
        forward=forward,
        backward=backward,
        anchor="IPHT^2_2 with apartness <= IPT^2_2 (relativized to apart carriers)",
    )


def ipt_from_ipht(chain_length: int = 4) -> ReductionStep:
    """IPT^2_2 reduces to IPHT^2_2 with apartness: same instance map as
    the HT^{=2} route; the backward map first interleaves the two sides
    into an alternating chain, then extracts the exponent sets."""
    if chain_length < 4 or chain_length % 2:
        raise DomainError("chain length must be an even number >= 4")

    def forward(c: Coloring) -> Coloring:
        if c.arity != PAIR:
            raise DomainError("expected a coloring of increasing pairs")
        return compose_coloring("pair-encode", (), c, NAT, max(2, c.colors))

    def backward(solution, _c: Coloring) -> PolarizedSets:
        if not isinstance(solution, PolarizedSets) or len(solution.parts) != 2:
            raise DomainError("expected a polarized pair solution")
        h1, h2 = solution.parts
        chain = _greedy_interleave(h1, h2, chain_length)
        odd = FiniteSet(least_exponent(h, 2) for h in chain[0::2])
        even = FiniteSet(greatest_exponent(h, 2) for h in chain[1::2])
        return PolarizedSets((odd, even))

    return ReductionStep(
        id="ipt-from-ipht",
        source=PrincipleId("IPT", 2, dimension=2),
        target=PrincipleId("IPHT", 2, dimension=2, apartness=2),
        forward=forward,
        backward=backward,
        anchor="IPT^2_2 <=sc IPHT^2_2 with apartness",
    )


def _greedy_interleave(h1: Iterable[int], h2: Iterable[int], length: int) -> list[int]:
    """Smallest alternating chain x_1 < x_2 < ... with odd positions from
    h1, even from h2; the first element must have positive least exponent."""
    pools = (sorted(h1), sorted(h2))
    chain: list[int] = []
    last = 0
    for pos in range(length):
        pool = pools[pos % 2]
        nxt = None
        for v in pool:
            if v > last and (pos > 0 or least_exponent(v, 2) > 0):
                nxt = v
                break
        if nxt is None:
            raise InterleaveError(
                f"no alternating chain of length {length}: stuck at position {pos} after {last}"
            )
        chain.append(nxt)
        last = nxt
    return chain


def ipht_from_ht_large(t: int = 2) -> ReductionStep:
    """IPHT^2_2 with apartness reduces to exactly-large-sums Hindman with
    apartness: chunk the solution into consecutive exactly large pieces;
    one side takes each piece's sum minus its largest term, the other the
    largest terms themselves."""

    def forward(f: Coloring) -> Coloring:
        if f.arity != NAT:
            raise DomainError("expected a coloring of naturals")
        return f

    def backward(solution, _f: Coloring) -> PolarizedSets:
        members = _members(solution)
        chunks = chunk_exactly_large(members)
        if len(chunks) < 2:
            raise ChunkError(f"only {len(chunks)} complete exactly large chunk(s) fit")
        t_side = []
        max_side = []
        for chunk in chunks:
            if not is_exactly_large(chunk):
                raise AssertionError(f"chunker produced a non-exactly-large piece {chunk}")
            s = sum(chunk)
            if s > U64_MAX:
                raise OverflowError("chunk sum exceeds the 64-bit unsigned range")
            t_side.append(s - chunk[-1])
            max_side.append(chunk[-1])
        ApartSet(t, tuple(sorted(t_side + max_side)))  # re-check union apartness
        return PolarizedSets((FiniteSet(t_side), FiniteSet(max_side)))

    return ReductionStep(
        id="ipht-from-ht-large",
        source=PrincipleId("IPHT", 2, dimension=2, apartness=t),
        target=PrincipleId("HT", 2, spec=ExactlyLarge(), apartness=t),
        forward=forward,
        backward=backward,
        anchor="IPHT^2_2 with apartness <=sc HT^{!w}_2 with apartness",
    )


def chunk_exactly_large(members: Sequence[int]) -> list[tuple[int, ...]]:
    """Greedy split into consecutive exactly large pieces: each piece
    takes min+1 consecutive elements; a trailing partial piece is dropped."""
    out = []
    i = 0
    while i < len(members):
        size = members[i] + 1
        if i + size > len(members):
            break
        out.append(tuple(members[i : i + size]))
        i += size
    return out


# ---------------------------------------------------------------------------
# divisibility


def divide_sum_reduction(n: int, m: int, k: int) -> ReductionStep:
    """HT^{=n}_k reduces to HT^{=m}_k when n divides m: the instance is
    unchanged; group the solution into consecutive disjoint blocks of
    d = m/n and sum each block."""
    if n < 2 or m < 2 or m % n:
        raise DomainError("need n, m >= 2 with n dividing m")
    d = m // n

    def forward(f: Coloring) -> Coloring:
        if f.arity != NAT:
            raise DomainError("expected a coloring of naturals")
        return f

    def backward(solution, _f: Coloring) -> FiniteSet:
        members = _members(solution)
        if len(members) < d * n:
            raise DomainError(f"need at least {d * n} members, got {len(members)}")
        sums = []
        for i in range(0, len(members) - d + 1, d):
            s = sum(members[i : i + d])
            if s > U64_MAX:
                raise OverflowError("block sum exceeds the 64-bit unsigned range")
            sums.append(s)
        return FiniteSet(sums)

    return ReductionStep(
        id=f"divide-sum[{n}|{m}]",
        source=PrincipleId("HT", k, spec=Exactly(n)),
        target=PrincipleId("HT", k, spec=Exactly(m)),
        forward=forward,
        backward=backward,
        anchor=f"HT^{{={n}}}_{k} <=sc HT^{{={m}}}_{k} (consecutive {d}-blocks)",
    )


def broken_divide_sum(n: int, m: int, k: int) -> ReductionStep:
    """Negative-control fixture: the first block sum is off by one, so the
    pulled-back set is not monochromatic for parity-sensitive instances.
    Used to prove that the certification sweep can fail."""
    good = divide_sum_reduction(n, m, k)

    def backward(solution, f: Coloring) -> FiniteSet:
        sums = list(good.backward(solution, f))
        sums[0] += 1
        return FiniteSet(sums)

    return ReductionStep(
        id=f"broken-divide-sum[{n}|{m}]",
        source=good.source,
        target=good.target,
        forward=good.forward,
        backward=backward,
        anchor="negative-control fixture (first block sum off by one)",
    )


# ---------------------------------------------------------------------------
# composition


def compose(a: ReductionStep, b: ReductionStep) -> ReductionStep:
    """Chain two reductions: source of a, target of b; transitivity of <=sc."""
    if a.target != b.source:
        raise CompositionError(
            f"cannot compose: {a.id} targets {a.target.describe()} "
            f"but {b.id} starts from {b.source.describe()}"
        )

    def forward(instance: Coloring) -> Coloring:
        return b.forward(a.forward(instance))

    def backward(solution, instance: Coloring):
        mid_instance = a.forward(instance)
        return a.backward(b.backward(solution, mid_instance), instance)

    return ReductionStep(
        id=f"{a.id}+{b.id}",
        source=a.source,
        target=b.target,
        forward=forward,
        backward=backward,
        anchor=f"{a.anchor}; {b.anchor}",
        provenance=a.provenance + b.provenance,
    )


def identity_step(pid: PrincipleId) -> ReductionStep:
    return ReductionStep(
        id="identity",
        source=pid,
        target=pid,
        forward=lambda c: c,
        backward=lambda s, _c: s,
        anchor="identity",
    )


# ---------------------------------------------------------------------------
# the step catalog


@dataclass(frozen=True)
class StepFamily:
    """A registered reduction family: id, parameter signature, anchor."""

    id: str
    params: str
    anchor: str
    build: Callable[..., ReductionStep] = field(compare=False)
    fixture: bool = False


def _build_fut_from_ht(spec, colors, apart, **_):
    return fut_from_ht(spec, colors, apart)


def _build_ht_from_fut(spec, colors, apart, **_):
    return ht_from_fut(spec, colors, apart)


def _build_apart_convert(spec, colors, apart, to_base, **_):
    return apartness_base_convert(spec, colors, apart, to_base)


def _build_color_doubling(spec, colors, **_):
    if not isinstance(spec, AtMost):
        raise DomainError("color doubling takes an AtMost spec")
    return color_doubling(spec.n, colors)


def _build_ht_exact_from_rt(spec, colors, apart, **_):
    if not isinstance(spec, Exactly):
        raise DomainError("this reduction takes an Exactly spec")
    return ht_exact_from_rt(spec.n, colors, apart)


def _build_ipt_from_ht_eq2(**_):
    return ipt_from_ht_eq2()


def _build_divide_sum(spec, target_spec, colors, **_):
    if not (isinstance(spec, Exactly) and isinstance(target_spec, Exactly)):
        raise DomainError("divide-sum takes Exactly specs on both sides")
    return divide_sum_reduction(spec.n, target_spec.n, colors)


def _build_broken_divide_sum(spec, target_spec, colors, **_):
    if not (isinstance(spec, Exactly) and isinstance(target_spec, Exactly)):
        raise DomainError("divide-sum takes Exactly specs on both sides")
    return broken_divide_sum(spec.n, target_spec.n, colors)


def _build_ipht_from_ipt(carriers, apart, **_):
    if carriers is None:
        pool = tuple(apart**i for i in range(8))
        carriers = (FiniteSet(pool[0::2]), FiniteSet(pool[1::2]))
    return ipht_from_ipt(carriers, apart)


def _build_ipt_from_ipht(**_):
    return ipt_from_ipht()


def _build_ipht_from_ht_large(apart, **_):
    return ipht_from_ht_large(apart)


def _build_exists_pair(apart, **_):
    return exists_pair_from_rt3(apart)


def _build_ht_large_from_rt_large(apart, **_):
    return ht_large_from_rt_large(apart)


STEP_FAMILIES: tuple[StepFamily, ...] = (
    StepFamily("fut-from-ht", "spec, colors, apart", "FUT^spec_k <=sc HT^spec_k with t-apartness", _build_fut_from_ht),
    StepFamily("ht-from-fut", "spec, colors, apart", "HT^spec_k with t-apartness <=sc FUT^spec_k", _build_ht_from_fut),
    StepFamily("apart-convert", "spec, colors, apart(t), to_base(s)", "HT with s-apartness <=sc HT with t-apartness, via FUT", _build_apart_convert),
    StepFamily("color-doubling", "spec(<=n), colors(k)", "HT^{<=n}_k with apartness <=sc HT^{<=n}_{2k}", _build_color_doubling),
    StepFamily("ht-exact-from-rt", "spec(=n), colors, apart", "HT^{=n}_k with apartness <=sc RT^n_k", _build_ht_exact_from_rt),
    StepFamily("ipt-from-ht-eq2", "", "IPT^2_2 <=sc HT^{=2}_2 with apartness", _build_ipt_from_ht_eq2),
    StepFamily("divide-sum", "spec(=n), target_spec(=m), colors", "HT^{=n}_k <=sc HT^{=m}_k when n | m", _build_divide_sum),
    StepFamily("ipht-from-ipt", "carriers, apart", "IPHT^2_2 with apartness <= IPT^2_2 (relativized carriers)", _build_ipht_from_ipt),
    StepFamily("ipt-from-ipht", "", "IPT^2_2 <=sc IPHT^2_2 with apartness", _build_ipt_from_ipht),
    StepFamily("ipht-from-ht-large", "apart", "IPHT^2_2 with apartness <=sc HT^{!w}_2 with apartness", _build_ipht_from_ht_large),
    StepFamily("exists-pair-from-rt3", "apart", "HT^{?{a<b}}_2 with apartness <=sc RT^3_8", _build_exists_pair),
    StepFamily("ht-large-from-rt-large", "apart", "HT^{!w}_2 with apartness <=sc RT^{!w}_2", _build_ht_large_from_rt_large),
    StepFamily("broken-divide-sum", "spec(=n), target_spec(=m), colors", "negative-control fixture (overlapping blocks)", _build_broken_divide_sum, fixture=True),
)


def step_family(family_id: str) -> StepFamily:
    for fam in STEP_FAMILIES:
        if fam.id == family_id:
            return fam
    raise DomainError(f"unknown reduction id {family_id!r}")


def build_step(
    family_id: str,
    *,
    spec: LengthSpec | None = None,
    target_spec: LengthSpec | None = None,
    colors: int = 2,
    apart: int = 2,
    to_base: int = 2,
    carriers=None,
) -> ReductionStep:
    fam = step_family(family_id)
    return fam.build(
        spec=spec,
        target_spec=target_spec,
        colors=colors,
        apart=apart,
        to_base=to_base,
        carriers=carriers,
    )


# ---------------------------------------------------------------------------
# range decoders


IN_RANGE, NOT_IN_RANGE, INCONCLUSIVE = "in-range", "not-in-range", "inconclusive"


def important_parity_coloring(injection: Rule) -> Coloring:
    """The 2-coloring counting important digit positions mod 2.

    Injectivity is the caller's contract; it is spot-checked on a small
    argument window here."""
    if not is_injection_rule(injection):
        raise DomainError(f"{injection.name} is not an injection rule")
    f = compile_injection(injection)
    probe = [f(a) for a in range(1, 65)]
    if len(set(probe)) != len(probe):
        raise DomainError("injection spot-check failed: duplicate values on [1, 64]")
    return Coloring(NAT, 2, Rule("important", (), (injection,)))


@dataclass(frozen=True)
class RangeDecoder:
    """A monochromatic apart set prepared for range decoding.

    ``members`` must be monochromatic under the important-parity coloring
    of the injection at the decoder's length spec; ``color`` is that
    homogeneous color."""

    injection: Rule
    spec: LengthSpec
    members: tuple[int, ...]
    color: int | None
    base: int = 2
    parity: Coloring = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "parity", important_parity_coloring(self.injection))
        rep = verify_ht(self.parity, self.spec, self.members, apart_base=self.base)
        if not rep.valid:
            raise DomainError(f"decoder set is not monochromatic: {rep.describe()}")
        if not rep.vacuous and rep.color != self.color:
            raise DomainError(f"declared color {self.color}, verified {rep.color}")


def _image_contains(injection: Rule, x: int, arg_bound: int) -> bool:
    """Is x a value of the injection on arguments 1 .. arg_bound-1?"""
    f = compile_injection(injection)
    return any(f(a) == x for a in range(1, arg_bound))


def range_decode_le2(decoder: RangeDecoder, x: int) -> str:
    """Decode with sums of at most two terms: find the smallest member n
    with x below its least exponent; membership is then decided by the
    injection's values on arguments below the greatest exponent of n."""
    if not isinstance(decoder.spec, AtMost) or decoder.spec.n != 2:
        raise DomainError("this decoder needs an AtMost(2) set")
    if x < 1:
        raise DomainError("queries are positive integers")
    for n in decoder.members:
        if x < least_exponent(n, decoder.base):
            bound = greatest_exponent(n, decoder.base)
            return IN_RANGE if _image_contains(decoder.injection, x, bound) else NOT_IN_RANGE
    return INCONCLUSIVE


def range_decode_eq_a(decoder: RangeDecoder, x: int, a: int = 3) -> str:
    """Decode with sums of exactly a >= 3 terms: the probe n is the sum of
    the first a-2 members past the point where x < lambda; a further
    member k with g(n+k) = r pins the argument bound to mu(k)."""
    if a < 3 or not isinstance(decoder.spec, Exactly) or decoder.spec.n != a:
        raise DomainError(f"this decoder needs an Exactly({a}) set with a >= 3")
    if x < 1:
        raise DomainError("queries are positive integers")
    members = decoder.members
    prefix_len = a - 2
    g = decoder.parity.compiled()
    for i, h in enumerate(members):
        if x >= least_exponent(h, decoder.base):
            continue
        if i + prefix_len > len(members):
            return INCONCLUSIVE
        n = sum(members[i : i + prefix_len])
        for k in members[i + prefix_len :]:
            if n + k > U64_MAX:
                raise OverflowError("probe sum exceeds the 64-bit unsigned range")
            if g(n + k) == decoder.color:
                bound = greatest_exponent(k, decoder.base)
                return IN_RANGE if _image_contains(decoder.injection, x, bound) else NOT_IN_RANGE
        return INCONCLUSIVE
    return INCONCLUSIVE


def range_decode_exactly_large(decoder: RangeDecoder, x: int) -> str:
    """Decode with exactly large sums: the probe is an almost exactly
    large sum, one element short of exactly large, starting at a member
    past the point where x < lambda."""
    if not isinstance(decoder.spec, ExactlyLarge):
        raise DomainError("this decoder needs an ExactlyLarge set")
    if x < 1:
        raise DomainError("queries are positive integers")
    members = decoder.members
    g = decoder.parity.compiled()
    for i, h in enumerate(members):
        if h < 2 or x >= least_exponent(h, decoder.base):
            continue
        prefix_len = h - 1  # h-1 terms total make the sum almost exactly large
        if i + prefix_len > len(members):
            return INCONCLUSIVE
        n = sum(members[i : i + prefix_len])
        for k in members[i + prefix_len :]:
            if n + k > U64_MAX:
                raise OverflowError("probe sum exceeds the 64-bit unsigned range")
            if g(n + k) == decoder.color:
                bound = greatest_exponent(k, decoder.base)
                return IN_RANGE if _image_contains(decoder.injection, x, bound) else NOT_IN_RANGE
        return INCONCLUSIVE
    return INCONCLUSIVE
