"""Brute-force witness engines.

The apart-set engine backtracks over members chosen as base-t exponent
blocks (each new member is a multiple of t^(mu(prev)+1), so candidate
order is increasing value) and prunes a branch as soon as any admissible
partial sum clashes with the branch color.  The first complete solution
in depth-first order is therefore the lexicographically least one, and
the node cap makes outcomes deterministic: a node is one attempted member
placement, counted identically in sequential and parallel runs.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .coloring import Coloring, NAT, PAIR, Rule, SET, Table, TRIPLE, eventually_constant
from .errors import BudgetError, DomainError
from .numerics import (
    AllUpTo,
    ApartSet,
    AtMost,
    Exactly,
    ExactlyLarge,
    ExplicitLengths,
    FiniteSet,
    LengthSpec,
    U64_MAX,
    check_apart,
    enumerate_sums,
    greatest_exponent,
)
from .principles import PolarizedSets, verify_ht, verify_ipt, verify_rt

log = logging.getLogger("finsums.search")

FOUND, EXHAUSTED, CAP_HIT = "found", "exhausted", "cap"


@dataclass(frozen=True)
class SearchBudget:
    max_exponent: int
    max_candidates: int
    target_size: int

    def __post_init__(self):
        if not (0 <= self.max_exponent <= 62):
            raise DomainError("max_exponent must lie in [0, 62] for 64-bit safety")
        if self.max_candidates < 1 or self.target_size < 1:
            raise DomainError("budget components must be positive")


@dataclass(frozen=True)
class SearchOutcome:
    status: str
    solution: object | None
    nodes_visited: int

    @property
    def found(self) -> bool:
        return self.status == FOUND


class _CapHit(Exception):
    pass


class _ApartEngine:
    """Single depth-first search, optionally restricted to one first member."""

    def __init__(
        self,
        coloring: Coloring,
        spec: LengthSpec,
        t: int,
        budget: SearchBudget,
        prune: bool,
        powers_only: bool = False,
    ):
        self.fn = coloring.compiled()
        self.spec = spec
        self.t = t
        self.budget = budget
        self.prune = prune
        self.powers_only = powers_only
        self.limit = t ** (budget.max_exponent + 1) - 1
        self.cap = budget.max_candidates
        self.nodes = 0
        self.found_at = 0
        self.prunes = 0
        self.overflow_hit = False
        self.ec = eventually_constant(coloring) if prune else None
        self.chosen: list[int] = []

    # --- sum bookkeeping -------------------------------------------------

    def _new_sum_parts(self, v: int) -> Iterator[int]:
        """Sums newly admissible once v joins the chosen prefix."""
        chosen, spec = self.chosen, self.spec
        if isinstance(spec, (AtMost, AllUpTo)):
            n = spec.n if isinstance(spec, AtMost) else spec.bound
            for l in range(0, min(n, len(chosen) + 1)):
                for parts in combinations(chosen, l):
                    yield sum(parts) + v
        elif isinstance(spec, Exactly):
            l = spec.n - 1
            if l <= len(chosen):
                for parts in combinations(chosen, l):
                    yield sum(parts) + v
        elif isinstance(spec, ExplicitLengths):
            for a in spec.lengths:
                if a - 1 <= len(chosen):
                    for parts in combinations(chosen, a - 1):
                        yield sum(parts) + v
        elif isinstance(spec, ExactlyLarge):
            # only fully-formed exactly large subsets of the partial set;
            # v is their maximum since members are chosen increasing
            for i, m in enumerate(chosen):
                need = m - 1
                between = chosen[i + 1 :]
                if need <= len(between):
                    for parts in combinations(between, need):
                        yield m + sum(parts) + v
        else:
            raise DomainError(f"unsupported spec {spec!r}")

    def _min_extra(self) -> int | None:
        """Minimal companion mass of any sum a new member would create;
        None when no sum is admissible at this depth."""
        chosen, spec = self.chosen, self.spec
        if isinstance(spec, (AtMost, AllUpTo)):
            return 0
        if isinstance(spec, Exactly):
            l = spec.n - 1
            return sum(chosen[:l]) if l <= len(chosen) else None
        if isinstance(spec, ExplicitLengths):
            for a in spec.lengths:
                if a - 1 <= len(chosen):
                    return sum(chosen[: a - 1])
            return None
        return None  # ExactlyLarge: no acceleration

    # --- search ----------------------------------------------------------

    def run(self, first: int | None = None) -> tuple[str, tuple[int, ...] | None]:
        try:
            if first is None:
                found = self._descend(None)
            else:
                self._count_node()  # the root placement is a node too
                found = self._try_candidate(first, None) is True
        except _CapHit:
            return CAP_HIT, None
        if found:
            return FOUND, tuple(self.chosen)
        return EXHAUSTED, None

    def _candidates(self, prev_mu: int) -> Iterator[int]:
        step = self.t ** (prev_mu + 1)
        v = step
        if self.powers_only:
            while v <= self.limit:
                yield v
                v *= self.t
            return
        while v <= self.limit:
            yield v
            v += step

    def _count_node(self) -> None:
        if self.nodes >= self.cap:
            raise _CapHit
        self.nodes += 1

    def _descend(self, branch_color: int | None) -> bool:
        prev_mu = greatest_exponent(self.chosen[-1], self.t) if self.chosen else -1
        min_extra = self._min_extra() if self.ec else None
        for v in self._candidates(prev_mu):
            self._count_node()
            if min_extra is not None and v + min_extra > self.ec[0]:
                # every remaining sum here and below evaluates to the
                # eventual constant; settle the branch in one step
                const = self.ec[1]
                if branch_color is not None and branch_color != const:
                    self.prunes += 1
                    return False  # larger candidates fail identically
                return self._jump(v)
            result = self._try_candidate(v, branch_color)
            if result is True:
                return True
            if result is None:  # subtree exhausted under overflow-free order
                continue
        return False

    def _try_candidate(self, v: int, branch_color: int | None):
        """Returns True when a solution completes under v, else None.

        On success the full solution is left on ``self.chosen``."""
        color = branch_color
        if self.prune:
            for s in self._new_sum_parts(v):
                if s > U64_MAX:
                    self._warn_overflow(v)
                    self.prunes += 1
                    return None
                c = self.fn(s)
                if color is None:
                    color = c
                elif c != color:
                    self.prunes += 1
                    return None
        self.chosen.append(v)
        if len(self.chosen) == self.budget.target_size:
            if not self.prune and not self._complete_is_monochromatic():
                self.chosen.pop()
                return None
            self.found_at = self.nodes
            return True
        if self._descend(color):
            return True
        self.chosen.pop()
        return None

    def _jump(self, v: int) -> bool:
        """Fill the remaining slots with least admissible members."""
        filled = 0
        self.chosen.append(v)
        filled += 1
        while len(self.chosen) < self.budget.target_size:
            step = self.t ** (greatest_exponent(self.chosen[-1], self.t) + 1)
            if step > self.limit:
                for _ in range(filled):
                    self.chosen.pop()
                return False  # exponent budget exhausted; larger picks fail too
            self._count_node()
            self.chosen.append(step)
            filled += 1
        self.found_at = self.nodes
        return True

    def _complete_is_monochromatic(self) -> bool:
        try:
            sums = enumerate_sums(self.chosen, self.spec)
        except OverflowError:
            self._warn_overflow(self.chosen[-1])
            return False
        if not sums:
            return True
        colors = {self.fn(s) for s in sums}
        return len(colors) == 1

    def _warn_overflow(self, v: int) -> None:
        if not self.overflow_hit:
            self.overflow_hit = True
            log.warning("stat overflow=1 candidate=%d", v)


def _budget_check(coloring: Coloring, spec: LengthSpec) -> None:
    if coloring.arity != NAT:
        raise DomainError("apart search takes a coloring of naturals")


def _subtree_task(args) -> tuple[str, tuple[int, ...] | None, int, int]:
    coloring, spec, t, budget, prune, powers_only, first = args
    eng = _ApartEngine(coloring, spec, t, budget, prune, powers_only)
    status, members = eng.run(first=first)
    return status, members, eng.nodes, eng.found_at


def search_apart_homogeneous(
    f: Coloring,
    spec: LengthSpec,
    t: int,
    budget: SearchBudget,
    *,
    prune: bool = True,
    jobs: int = 1,
    powers_only: bool = False,
) -> SearchOutcome:
    """Find the lexicographically least t-apart set of the target size
    whose FS^spec is monochromatic, within the node budget.

    ``powers_only`` restricts members to single powers of t (width-zero
    exponent intervals), the cheapest tier of the candidate order; the
    lexicographic-least contract then holds within that tier.

    Parallel runs return exactly the sequential outcome: subtree results
    are folded in candidate order with sequential node accounting.
    """
    _budget_check(f, spec)
    if jobs > 1:
        outcome = _parallel_search(f, spec, t, budget, prune, jobs, powers_only)
    else:
        eng = _ApartEngine(f, spec, t, budget, prune, powers_only)
        status, members = eng.run()
        sol = ApartSet(t, members) if members else None
        outcome = SearchOutcome(status, sol, eng.nodes if status != CAP_HIT else budget.max_candidates)
        log.info("stat nodes=%d prunes=%d status=%s", eng.nodes, eng.prunes, status)
    if outcome.found:
        rep = verify_ht(f, spec, outcome.solution, apart_base=t)
        if not (rep.valid):
            raise AssertionError(f"engine produced an invalid solution: {rep.describe()}")
    return outcome


def _parallel_search(f, spec, t, budget, prune, jobs, powers_only=False) -> SearchOutcome:
    import multiprocessing as mp

    cap = budget.max_candidates
    limit = t ** (budget.max_exponent + 1) - 1

    def first_candidates():
        v = 1
        while v <= limit:
            yield v
            v = v * t if powers_only else v + 1

    ctx = mp.get_context("fork")
    remaining = cap
    processed = 0
    with ctx.Pool(jobs) as pool:
        pending: list = []
        cand_iter = first_candidates()
        exhausted_iter = False
        result: SearchOutcome | None = None
        while result is None:
            while not exhausted_iter and len(pending) < 2 * jobs and processed + len(pending) < cap:
                try:
                    c = next(cand_iter)
                except StopIteration:
                    exhausted_iter = True
                    break
                pending.append(
                    pool.apply_async(_subtree_task, ((f, spec, t, budget, prune, powers_only, c),))
                )
            if not pending:
                result = SearchOutcome(EXHAUSTED, None, cap - remaining)
                break
            status, members, nodes_used, found_at = pending.pop(0).get()
            if status == FOUND and found_at <= remaining:
                total = cap - remaining + found_at
                result = SearchOutcome(FOUND, ApartSet(t, members), total)
            elif nodes_used >= remaining:
                result = SearchOutcome(CAP_HIT, None, cap)
            else:
                remaining -= nodes_used
                processed += nodes_used
        pool.terminate()
    log.info("stat nodes=%d status=%s jobs=%d", result.nodes_visited, result.status, jobs)
    return result


# ---------------------------------------------------------------------------
# tuple-homogeneous and polarized searches


def search_tuple_homogeneous(
    c: Coloring,
    n: int,
    ground: Iterable[int],
    target_size: int,
    *,
    prune: bool = True,
) -> SearchOutcome:
    """Lexicographically least c-homogeneous subset of the ground set."""
    elems = tuple(sorted(set(ground)))
    if target_size < n:
        raise DomainError("target size below the tuple dimension")
    if len(elems) < target_size:
        return SearchOutcome(EXHAUSTED, None, 0)
    fn = c.compiled()
    nodes = 0
    chosen: list[int] = []

    def rec(start: int, branch: int | None) -> bool:
        nonlocal nodes
        for i in range(start, len(elems)):
            nodes += 1
            v = elems[i]
            color = branch
            ok = True
            if prune and len(chosen) >= n - 1:
                for parts in combinations(chosen, n - 1):
                    col = fn(parts + (v,))
                    if color is None:
                        color = col
                    elif col != color:
                        ok = False
                        break
            if not ok:
                continue
            chosen.append(v)
            if len(chosen) == target_size:
                if prune or _tuples_monochromatic(fn, chosen, n):
                    return True
                chosen.pop()
                continue
            if rec(i + 1, color):
                return True
            chosen.pop()
        return False

    if rec(0, None):
        sol = FiniteSet(chosen)
        rep = verify_rt(c, n, sol)
        if not rep.valid:
            raise AssertionError(f"engine produced an invalid solution: {rep.describe()}")
        return SearchOutcome(FOUND, sol, nodes)
    return SearchOutcome(EXHAUSTED, None, nodes)


def _tuples_monochromatic(fn, members: Sequence[int], n: int) -> bool:
    colors = {fn(t) for t in combinations(sorted(members), n)}
    return len(colors) <= 1


def search_increasing_polarized(
    c: Coloring,
    n: int,
    carriers: Sequence[Iterable[int]],
    size_per_side: int,
) -> SearchOutcome:
    """Least (H_1, ..., H_n) with H_i inside carrier_i, all increasing
    selections monochromatic, and at least one increasing selection."""
    pools = [tuple(sorted(set(s))) for s in carriers]
    if len(pools) != n or any(not p for p in pools):
        raise DomainError(f"need {n} non-empty carriers")
    if any(len(p) < size_per_side for p in pools):
        return SearchOutcome(EXHAUSTED, None, 0)
    fn = c.compiled()
    nodes = 0
    for combo in product(*(combinations(p, size_per_side) for p in pools)):
        nodes += 1
        color = None
        ok = True
        any_selection = False
        for t in product(*combo):
            if all(a < b for a, b in zip(t, t[1:])):
                any_selection = True
                col = fn(t)
                if color is None:
                    color = col
                elif col != color:
                    ok = False
                    break
        if ok and any_selection:
            sol = PolarizedSets(tuple(FiniteSet(side) for side in combo))
            rep = verify_ipt(c, n, [tuple(s) for s in sol.parts])
            if not (rep.valid and not rep.vacuous):
                raise AssertionError(f"engine produced an invalid solution: {rep.describe()}")
            return SearchOutcome(FOUND, sol, nodes)
    return SearchOutcome(EXHAUSTED, None, nodes)


# ---------------------------------------------------------------------------
# canonical coloring enumeration


def window_cells(arity: str, window: tuple[int, int]) -> tuple | tuple[tuple, ...]:
    """The evaluation cells of a window, in canonical order."""
    lo, hi = window
    values = range(lo, hi + 1)
    if arity == NAT:
        return tuple(values)
    if arity == PAIR:
        return tuple(combinations(values, 2))
    if arity == TRIPLE:
        return tuple(combinations(values, 3))
    if arity == SET:
        out = []
        for r in range(1, hi - lo + 2):
            out.extend(combinations(values, r))
        return tuple(out)
    raise DomainError(f"unknown arity {arity!r}")


def count_canonical_colorings(ncells: int, k: int) -> int:
    """Representatives per color-permutation orbit: growth strings."""
    if ncells == 0:
        return 1
    # row[j] = strings of the current length using exactly j+1 colors
    row = [1] + [0] * (k - 1)
    for _ in range(ncells - 1):
        row = [row[j] * (j + 1) + (row[j - 1] if j else 0) for j in range(k)]
    return sum(row)


def enumerate_colorings(
    arity: str,
    k: int,
    window: tuple[int, int],
    *,
    cells: Sequence | None = None,
    default: Rule | None = None,
    max_orbits: int | None = None,
) -> Iterator[Coloring]:
    """Yield one Table per color-permutation orbit, in canonical order.

    Canonical form: scanning cells in order, each new color is the
    smallest unused one, so first occurrences appear increasing.
    """
    cell_list = tuple(cells) if cells is not None else window_cells(arity, window)
    if max_orbits is not None and count_canonical_colorings(len(cell_list), k) > max_orbits:
        raise BudgetError(f"orbit count exceeds cap {max_orbits}")
    assignment = [0] * len(cell_list)

    def build() -> Coloring:
        entries = tuple(zip(cell_list, assignment))
        return Coloring(arity, k, Table(window=window, entries=entries, default=default))

    if not cell_list:
        yield build()
        return

    def rec(i: int, used: int) -> Iterator[Coloring]:
        if i == len(cell_list):
            yield build()
            return
        for color in range(min(used + 1, k)):
            assignment[i] = color
            yield from rec(i + 1, max(used, color + 1))

    yield from rec(1, 1)  # cell 0 is pinned to color 0 by canonicity


def canonical_table_from_index(
    arity: str,
    window: tuple[int, int],
    cells: Sequence,
    index: int,
    default: Rule | None = None,
) -> Coloring:
    """The index-th canonical 2-coloring table: bits of index over cells[1:]."""
    assignment = [0] + [(index >> i) & 1 for i in range(len(cells) - 1)]
    entries = tuple(zip(tuple(cells), assignment))
    return Coloring(arity, 2, Table(window=window, entries=entries, default=default))


# ---------------------------------------------------------------------------
# finite witness numbers


def witness_number(
    spec: LengthSpec,
    k: int,
    target_size: int,
    t: int,
    *,
    max_n: int = 40,
    max_orbits: int = 1 << 22,
) -> int:
    """Least N such that every k-coloring of [1..N] admits a t-apart
    monochromatic set of the target size with all admissible sums <= N."""
    if target_size == 1:
        return 1
    for n in range(1, max_n + 1):
        if count_canonical_colorings(n, k) > max_orbits:
            raise BudgetError(f"orbit count for N={n} exceeds cap {max_orbits}")
        candidates = []
        for members in combinations(range(1, n + 1), target_size):
            if not check_apart(members, t)[0]:
                continue
            sums = enumerate_sums(members, spec)
            if sums and sums[-1] <= n:
                candidates.append(tuple(sums))
        if not candidates:
            continue
        if all(
            any(len({fn(s) for s in sums}) == 1 for sums in candidates)
            for fn in (c.compiled() for c in enumerate_colorings(NAT, k, (1, n)))
        ):
            return n
    raise BudgetError(f"no witness number found up to N={max_n}")
