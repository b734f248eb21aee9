from itertools import combinations

import pytest

from finsums.coloring import (
    NAT,
    PAIR,
    Coloring,
    Rule,
    Table,
    constant,
    mod_rule,
    pair_rule,
)
from finsums.errors import BudgetError
from finsums.numerics import AtMost, Exactly, ExactlyLarge, check_apart, enumerate_sums
from finsums.search import (
    SearchBudget,
    canonical_table_from_index,
    count_canonical_colorings,
    enumerate_colorings,
    search_apart_homogeneous,
    search_increasing_polarized,
    search_tuple_homogeneous,
    window_cells,
    witness_number,
)

PARITY = mod_rule(2, (0, 1))


def oracle_least_apart(f, spec, t, size, value_limit):
    """Exhaustive reference search over all apart subsets up to a value bound."""
    values = range(1, value_limit + 1)
    best = None
    for members in combinations(values, size):
        if not check_apart(members, t)[0]:
            continue
        sums = enumerate_sums(members, spec)
        if len({f(s) for s in sums}) <= 1:
            best = members
            break  # combinations yields lexicographically smallest first
    return best


class TestApartSearch:
    def test_constant_least(self):
        out = search_apart_homogeneous(
            constant(0, colors=2), AtMost(2), 2, SearchBudget(20, 10_000, 4)
        )
        assert out.found
        assert out.solution.members == (1, 2, 4, 8)

    def test_parity_at_most_one_frozen(self):
        # oracle: no apart pair starting at 1 is monochromatic for parity,
        # the least same-parity apart pair is {2, 4}
        out = search_apart_homogeneous(PARITY, AtMost(1), 2, SearchBudget(8, 10_000, 2))
        assert out.found
        assert out.solution.members == (2, 4)
        assert out.solution.members == oracle_least_apart(
            lambda n: n % 2, AtMost(1), 2, 2, 2**9
        )

    @pytest.mark.parametrize("spec", [AtMost(2), Exactly(2)])
    def test_matches_exhaustive_oracle(self, spec):
        f = mod_rule(3, (0, 1, 1))
        out = search_apart_homogeneous(f, spec, 2, SearchBudget(8, 50_000, 3))
        want = oracle_least_apart(f.compiled(), spec, 2, 3, 2**9)
        assert out.found and out.solution.members == want

    def test_impossible_budget_exhausts(self):
        out = search_apart_homogeneous(
            constant(0, colors=2), AtMost(1), 2, SearchBudget(2, 10_000, 5)
        )
        assert out.status == "exhausted"

    def test_cap_hit(self):
        out = search_apart_homogeneous(PARITY, AtMost(1), 2, SearchBudget(40, 5, 6))
        assert out.status == "cap"
        assert out.nodes_visited == 5

    def test_base_three(self):
        out = search_apart_homogeneous(
            constant(0, colors=2), AtMost(2), 3, SearchBudget(12, 10_000, 3)
        )
        assert out.found
        assert check_apart(out.solution.members, 3)[0]

    def test_exactly_large_spec(self):
        out = search_apart_homogeneous(PARITY, ExactlyLarge(), 2, SearchBudget(7, 100_000, 5))
        assert out.found
        # exactly large subsets of {1,4,8,16,32} are exactly the pairs {1,x},
        # whose sums are all odd; no 5-set below it works since any {1,2,...}
        # prefix forces an even {2,x,y} sum
        assert out.solution.members == (1, 4, 8, 16, 32)

    def test_eventually_constant_acceleration(self):
        # table + constant default: search must fall through to members
        # beyond the window once in-window sums cannot agree
        cells = (1, 2, 3)
        table = Table(window=(1, 3), entries=tuple(zip(cells, (0, 1, 1))), default=Rule("constant", (1,)))
        f = Coloring(NAT, 2, table)
        out = search_apart_homogeneous(f, AtMost(1), 2, SearchBudget(20, 10_000, 3))
        assert out.found
        assert out.solution.members == (2, 4, 8)


class TestParallelEquivalence:
    @pytest.mark.parametrize("cap", [7, 50, 100_000])
    def test_outcomes_identical(self, cap):
        f = mod_rule(3, (0, 1, 0))
        for spec in [AtMost(1), AtMost(2), Exactly(2)]:
            budget = SearchBudget(10, cap, 3)
            seq = search_apart_homogeneous(f, spec, 2, budget, jobs=1)
            par = search_apart_homogeneous(f, spec, 2, budget, jobs=4)
            assert seq.status == par.status
            assert seq.nodes_visited == par.nodes_visited
            if seq.found:
                assert seq.solution == par.solution


class TestPruneEquivalence:
    @pytest.mark.parametrize(
        "f",
        [constant(0, colors=2), PARITY, mod_rule(3, (0, 1, 0)), mod_rule(4, (0, 0, 1, 1))],
        ids=["const", "parity", "mod3", "mod4"],
    )
    def test_pruned_vs_unpruned(self, f):
        budget = SearchBudget(9, 2_000_000, 3)
        pruned = search_apart_homogeneous(f, AtMost(2), 2, budget, prune=True)
        unpruned = search_apart_homogeneous(f, AtMost(2), 2, budget, prune=False)
        assert pruned.status == unpruned.status
        if pruned.found:
            assert pruned.solution == unpruned.solution


class TestTupleSearch:
    PAIR_SUM = pair_rule("pair-sum", 2, (0, 1))

    def test_constant_prefix(self):
        out = search_tuple_homogeneous(constant(0, arity=PAIR, colors=2), 2, range(1, 10), 3)
        assert out.found and tuple(out.solution) == (1, 2, 3)

    def test_parity_pairs_frozen(self):
        # oracle over all 3-subsets of {1..6}: {1,3,5} is least homogeneous
        out = search_tuple_homogeneous(self.PAIR_SUM, 2, range(1, 7), 3)
        assert out.found and tuple(out.solution) == (1, 3, 5)

    def test_too_small_ground(self):
        out = search_tuple_homogeneous(self.PAIR_SUM, 2, {1, 2}, 3)
        assert out.status == "exhausted"

    def test_unpruned_agrees(self):
        a = search_tuple_homogeneous(self.PAIR_SUM, 2, range(1, 9), 4, prune=True)
        b = search_tuple_homogeneous(self.PAIR_SUM, 2, range(1, 9), 4, prune=False)
        assert a.found and b.found and a.solution == b.solution


class TestPolarizedSearch:
    PAIR_SUM = pair_rule("pair-sum", 2, (0, 1))

    def test_constant(self):
        out = search_increasing_polarized(
            constant(0, arity=PAIR, colors=2), 2, [range(1, 5), range(1, 5)], 2
        )
        assert out.found
        assert tuple(map(tuple, out.solution.parts)) == ((1, 2), (1, 2))

    def test_pair_sum(self):
        out = search_increasing_polarized(self.PAIR_SUM, 2, [range(0, 8), range(0, 8)], 2)
        assert out.found
        rep_parts = out.solution.parts
        from finsums.principles import verify_ipt

        rep = verify_ipt(self.PAIR_SUM, 2, [tuple(p) for p in rep_parts])
        assert rep.valid and not rep.vacuous

    def test_agreement_with_tuple_search_on_diagonal(self):
        # cross-oracle: a tuple-homogeneous set gives a polarized solution
        ts = search_tuple_homogeneous(self.PAIR_SUM, 2, range(1, 9), 2)
        assert ts.found
        h = tuple(ts.solution)
        from finsums.principles import verify_ipt

        assert verify_ipt(self.PAIR_SUM, 2, [h, h]).valid


class TestEnumerateColorings:
    def test_counts(self):
        assert count_canonical_colorings(2, 2) == 2
        for n in range(1, 6):
            assert count_canonical_colorings(n, 2) == 2 ** (n - 1)
        # Bell-style growth for k=3 on 4 cells: RGS strings capped at 3 colors
        assert count_canonical_colorings(4, 3) == 14

    def test_enumeration_is_canonical_and_complete(self):
        tables = list(enumerate_colorings(NAT, 2, (1, 3)))
        assert len(tables) == 4
        seen = set()
        for c in tables:
            colors = tuple(color for _key, color in c.body.entries)
            assert colors[0] == 0
            seen.add(colors)
            # first occurrences increasing
            firsts = [colors.index(v) for v in sorted(set(colors))]
            assert firsts == sorted(firsts)
        assert len(seen) == 4

    def test_budget(self):
        with pytest.raises(BudgetError):
            list(enumerate_colorings(NAT, 2, (1, 30), max_orbits=100))

    def test_from_index_matches_enumeration_set(self):
        cells = window_cells(NAT, (1, 4))
        via_enum = {
            tuple(color for _k, color in c.body.entries)
            for c in enumerate_colorings(NAT, 2, (1, 4))
        }
        via_index = {
            tuple(color for _k, color in canonical_table_from_index(NAT, (1, 4), cells, i).body.entries)
            for i in range(8)
        }
        assert via_enum == via_index


class TestWitnessNumber:
    def test_singleton(self):
        assert witness_number(AtMost(1), 2, 1, 2) == 1

    def test_frozen_small_case(self):
        # exhaustive computation is the oracle: apart pairs within [1..4]
        # are (1,2),(1,4),(2,4); three values, two colors, pigeonhole
        assert witness_number(AtMost(1), 2, 2, 2) == 4

    def test_monotone_in_target_size(self):
        a = witness_number(AtMost(1), 2, 2, 2)
        b = witness_number(AtMost(1), 2, 3, 2, max_n=24)
        assert b >= a

    def test_budget_error(self):
        with pytest.raises(BudgetError):
            witness_number(AtMost(2), 2, 4, 2, max_n=3)
