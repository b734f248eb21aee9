"""Principle descriptors, solution shapes, and validity verifiers.

Verifiers short-circuit on the first clash and always return a concrete
witness; vacuous checks (no sum/tuple to inspect) are reported as their
own status, never as success-with-color.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from .coloring import NAT, PAIR, SET, TRIPLE, Coloring
from .errors import DomainError
from .numerics import (
    ApartSet,
    BlockSequence,
    ExactlyLarge,
    FiniteSet,
    LengthSpec,
    U64_MAX,
    admissible_lengths,
    check_apart,
    exactly_large_subsets,
    format_length_spec,
)

FAMILIES = ("HT", "FUT", "RT", "IPT", "IPHT", "PHT")


@dataclass(frozen=True)
class PrincipleId:
    """Which principle a coloring instantiates or a solution solves."""

    family: str
    colors: int
    spec: LengthSpec | None = None
    dimension: int | None = None
    apartness: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        if self.colors < 1:
            raise DomainError("need at least one color")
        if self.family in ("HT", "FUT"):
            if self.spec is None:
                raise DomainError(f"{self.family} needs a length spec")
        elif self.family == "RT" and isinstance(self.spec, ExactlyLarge):
            pass  # Ramsey for exactly large sets has no fixed dimension
        elif self.dimension is None or self.dimension < 1:
            raise DomainError(f"{self.family} needs a dimension >= 1")
        if self.apartness is not None and self.family not in ("HT", "IPHT", "PHT"):
            raise DomainError(f"apartness does not apply to {self.family}")

    def describe(self) -> str:
        if self.family in ("HT", "FUT") or self.dimension is None:
            head = f"{self.family}^{{{format_length_spec(self.spec)}}}_{self.colors}"
        else:
            head = f"{self.family}^{self.dimension}_{self.colors}"
        if self.apartness is not None:
            head += f" with {self.apartness}-apartness"
        return head


@dataclass(frozen=True)
class PolarizedSets:
    """An n-tuple of finite sets, the polarized solution shape."""

    parts: tuple[FiniteSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(FiniteSet(p) for p in self.parts))
        if not self.parts or any(not p for p in self.parts):
            raise DomainError("polarized solutions need non-empty parts")


Solution = FiniteSet | ApartSet | BlockSequence | PolarizedSets


@dataclass(frozen=True)
class Clash:
    """Two checked objects that received different colors.

    ``first``/``second`` describe the objects (a sum with its parts, a
    union with its blocks, or a tuple)."""

    kind: str
    first: tuple
    first_color: int | None
    second: tuple
    second_color: int | None

    def describe(self) -> str:
        if self.kind == "apartness":
            return f"apartness fails at pair {self.first}"
        return (
            f"{self.kind} {self.first} has color {self.first_color} "
            f"but {self.kind} {self.second} has color {self.second_color}"
        )


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    color: int | None = None
    witness: Clash | None = None
    vacuous: bool = False

    def describe(self) -> str:
        if self.vacuous:
            return "vacuous (nothing to check)"
        if self.valid:
            return f"valid with color {self.color}"
        return f"invalid: {self.witness.describe()}"


def _members(solution) -> tuple[int, ...]:
    if isinstance(solution, ApartSet):
        return solution.members
    if isinstance(solution, (PolarizedSets, BlockSequence)):
        raise DomainError(f"expected a plain or apart set, got {type(solution).__name__}")
    try:
        members = tuple(solution)
    except TypeError:
        raise DomainError(f"not a set-shaped solution: {solution!r}") from None
    if any(not isinstance(m, int) for m in members):
        raise DomainError(f"expected a set of integers, got {solution!r}")
    return members


def _scan(colored_objects, kind: str) -> VerificationReport:
    """Common drive: all objects must share one color."""
    first_obj = None
    first_color = None
    for obj, color in colored_objects:
        if first_obj is None:
            first_obj, first_color = obj, color
        elif color != first_color:
            return VerificationReport(
                valid=False,
                witness=Clash(kind, first_obj, first_color, obj, color),
            )
    if first_obj is None:
        return VerificationReport(valid=True, vacuous=True)
    return VerificationReport(valid=True, color=first_color)


def _sum_objects(f, members: tuple[int, ...], spec: LengthSpec):
    if isinstance(spec, ExactlyLarge):
        subsets = exactly_large_subsets(members)
    else:
        subsets = (
            c for j in admissible_lengths(spec, len(members)) for c in combinations(members, j)
        )
    for parts in subsets:
        total = sum(parts)
        if total > U64_MAX:
            raise OverflowError(f"sum of {parts} exceeds the 64-bit unsigned range")
        yield (total, parts), f(total)


def verify_ht(
    f: Coloring,
    spec: LengthSpec,
    solution,
    apart_base: int | None = None,
) -> VerificationReport:
    """Is FS^spec of the solution monochromatic (and the set apart, if asked)?"""
    if f.arity != NAT:
        raise DomainError("finite-sums instances color naturals")
    members = _members(solution)
    if not members or any(m < 1 for m in members):
        raise DomainError("solutions are non-empty sets of positive integers")
    if apart_base is not None:
        ok, pair = check_apart(members, apart_base)
        if not ok:
            return VerificationReport(
                valid=False, witness=Clash("apartness", pair, None, pair, None)
            )
    fn = f.compiled()
    return _scan(_sum_objects(fn, members, spec), "sum")


def verify_fut(c: Coloring, spec: LengthSpec, blocks: BlockSequence) -> VerificationReport:
    """Is FU^spec of the block sequence monochromatic?"""
    if c.arity != SET:
        raise DomainError("finite-unions instances color finite sets")
    if not isinstance(blocks, BlockSequence):
        blocks = BlockSequence(blocks)
    fn = c.compiled()

    def unions():
        for j in admissible_lengths(spec, len(blocks)):
            for chosen in combinations(range(len(blocks)), j):
                merged: list[int] = []
                for i in chosen:
                    merged.extend(blocks[i])
                key = tuple(sorted(merged))
                yield (key, chosen), fn(key)

    return _scan(unions(), "union")


def verify_rt(c: Coloring, n: int, h) -> VerificationReport:
    """Is every increasing n-tuple from h the same color?"""
    _check_tuple_arity(c, n)
    members = _members(h)
    if len(members) < n:
        raise DomainError(f"need at least {n} elements, got {len(members)}")
    fn = c.compiled()
    return _scan(((t, fn(t)) for t in combinations(members, n)), "tuple")


def verify_ipt(c: Coloring, n: int, hs: Sequence[Iterable[int]]) -> VerificationReport:
    """Is every increasing selection x_1 < ... < x_n with x_i in hs[i]
    the same color?  Vacuous when no increasing selection exists."""
    _check_tuple_arity(c, n)
    parts = [tuple(sorted(h)) for h in hs]
    if len(parts) != n or any(not p for p in parts):
        raise DomainError(f"need {n} non-empty sets")
    fn = c.compiled()

    def selections():
        for t in product(*parts):
            if all(a < b for a, b in zip(t, t[1:])):
                yield t, fn(t)

    return _scan(selections(), "tuple")


def verify_polarized_ht(
    f: Coloring,
    n: int,
    hs: Sequence[Iterable[int]],
    increasing: bool = True,
    apart_base: int | None = None,
) -> VerificationReport:
    """Is f constant on sums over selections from hs (increasing ones when
    flagged)?  With apart_base set, the union of the parts must be apart."""
    if f.arity != NAT:
        raise DomainError("polarized finite-sums instances color naturals")
    parts = [tuple(sorted(h)) for h in hs]
    if len(parts) != n or any(not p for p in parts):
        raise DomainError(f"need {n} non-empty sets")
    if apart_base is not None:
        merged: list[int] = []
        for p in parts:
            merged.extend(p)
        if len(set(merged)) != len(merged):
            raise DomainError("parts must be disjoint when apartness is demanded")
        ok, pair = check_apart(sorted(merged), apart_base)
        if not ok:
            return VerificationReport(
                valid=False, witness=Clash("apartness", pair, None, pair, None)
            )
    fn = f.compiled()

    def sums():
        for t in product(*parts):
            if increasing and not all(a < b for a, b in zip(t, t[1:])):
                continue
            total = sum(t)
            if total > U64_MAX:
                raise OverflowError(f"sum of {t} exceeds the 64-bit unsigned range")
            yield (total, t), fn(total)

    return _scan(sums(), "sum")


def _check_tuple_arity(c: Coloring, n: int) -> None:
    want = {2: PAIR, 3: TRIPLE}.get(n)
    if want is None:
        raise DomainError(f"tuple verifiers support dimensions 2 and 3, got {n}")
    if c.arity != want:
        raise DomainError(f"expected a {want} coloring, got {c.arity}")
