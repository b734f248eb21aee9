import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finsums.coloring import PAIR, constant, mod_rule, pair_rule, set_rule
from finsums.errors import DomainError
from finsums.numerics import (
    AtMost,
    BlockSequence,
    Exactly,
    ExactlyLarge,
    ExplicitLengths,
    FiniteSet,
)
from finsums.principles import (
    PolarizedSets,
    PrincipleId,
    verify_fut,
    verify_ht,
    verify_ipt,
    verify_polarized_ht,
    verify_rt,
)

PARITY = mod_rule(2, (0, 1))


class TestVerifyHT:
    def test_constant_valid(self):
        rep = verify_ht(constant(0, colors=2), AtMost(2), {1, 4, 16})
        assert rep.valid and rep.color == 0

    def test_exactly_two_pair(self):
        rep = verify_ht(PARITY, Exactly(2), {1, 4})
        assert rep.valid and rep.color == 1  # only sum is 5

    def test_invalid_with_witness(self):
        rep = verify_ht(PARITY, AtMost(1), {1, 2, 4})
        assert not rep.valid
        assert rep.witness.first == (1, (1,))
        assert rep.witness.second == (2, (2,))
        assert {rep.witness.first_color, rep.witness.second_color} == {0, 1}

    def test_apartness_gate(self):
        rep = verify_ht(constant(0, colors=2), AtMost(1), {3, 6}, apart_base=2)
        assert not rep.valid and rep.witness.kind == "apartness"
        assert rep.witness.first == (3, 6)

    def test_vacuous_exactly(self):
        rep = verify_ht(PARITY, Exactly(3), {1, 2})
        assert rep.valid and rep.vacuous and rep.color is None

    def test_exactly_large(self):
        rep = verify_ht(PARITY, ExactlyLarge(), {1, 2, 8})
        assert rep.valid and rep.color == 1  # sums 3 and 9

    @settings(max_examples=50)
    @given(st.sets(st.integers(1, 60), min_size=2, max_size=6), st.integers(2, 3))
    def test_monotone_in_length(self, members, n):
        # valid AtMost(n) implies valid Exactly(j) for each j <= n, same color
        rep = verify_ht(PARITY, AtMost(n), members)
        if rep.valid and not rep.vacuous:
            for j in range(1, n + 1):
                sub = verify_ht(PARITY, Exactly(j), members)
                assert sub.valid
                if not sub.vacuous:
                    assert sub.color == rep.color

    @settings(max_examples=50)
    @given(st.data())
    def test_subset_closure(self, data):
        members = data.draw(st.sets(st.integers(1, 60), min_size=3, max_size=6))
        rep = verify_ht(PARITY, AtMost(2), members)
        if rep.valid:
            sub = data.draw(st.sets(st.sampled_from(sorted(members)), min_size=2))
            subrep = verify_ht(PARITY, AtMost(2), sub)
            assert subrep.valid and subrep.color == rep.color


class TestVerifyFUT:
    def test_size_parity_valid(self):
        c = set_rule("set-size", 2, (0, 1))
        rep = verify_fut(c, Exactly(2), BlockSequence([[1], [3]]))
        assert rep.valid and rep.color == 0  # one union, size 2

    def test_min_parity_invalid(self):
        c = set_rule("set-min", 2, (0, 1))
        rep = verify_fut(c, AtMost(2), BlockSequence([[1], [2]]))
        assert not rep.valid
        assert rep.witness.first[0] == (1,)
        assert rep.witness.second[0] == (2,)

    def test_constant(self):
        c = constant(1, arity="set", colors=2)
        rep = verify_fut(c, AtMost(3), BlockSequence([[0, 1], [4], [6, 9]]))
        assert rep.valid and rep.color == 1


class TestVerifyRT:
    PAIR_SUM = pair_rule("pair-sum", 2, (0, 1))

    def test_constant(self):
        rep = verify_rt(constant(0, arity=PAIR, colors=2), 2, {1, 2, 3})
        assert rep.valid and rep.color == 0

    def test_odd_numbers(self):
        rep = verify_rt(self.PAIR_SUM, 2, {1, 3, 5})
        assert rep.valid and rep.color == 0

    def test_mixed_invalid(self):
        rep = verify_rt(self.PAIR_SUM, 2, {1, 2, 3})
        assert not rep.valid

    def test_too_small(self):
        with pytest.raises(DomainError):
            verify_rt(self.PAIR_SUM, 2, {1})


class TestVerifyIPT:
    PAIR_SUM = pair_rule("pair-sum", 2, (0, 1))

    def test_frozen_example(self):
        # pairs (1,4),(1,8),(3,4),(3,8) all have odd sums
        rep = verify_ipt(self.PAIR_SUM, 2, [{1, 3}, {4, 8}])
        assert rep.valid and rep.color == 1

    def test_vacuous(self):
        rep = verify_ipt(self.PAIR_SUM, 2, [{5}, {3}])
        assert rep.valid and rep.vacuous

    def test_constant(self):
        rep = verify_ipt(constant(0, arity=PAIR, colors=2), 2, [{2, 9}, {4, 11}])
        assert rep.valid and rep.color == 0

    def test_rt_implies_ipt_on_diagonal(self):
        h = {1, 3, 5, 7}
        rt = verify_rt(self.PAIR_SUM, 2, h)
        ipt = verify_ipt(self.PAIR_SUM, 2, [h, h])
        assert rt.valid and ipt.valid and rt.color == ipt.color


class TestVerifyPolarized:
    def test_valid(self):
        rep = verify_polarized_ht(PARITY, 2, [{2}, {8}], increasing=True)
        assert rep.valid and rep.color == 0

    def test_invalid(self):
        f = mod_rule(3, (0, 1, 2))
        rep = verify_polarized_ht(f, 2, [{1, 2}, {4}], increasing=True)
        assert not rep.valid  # sums 5 and 6

    def test_apartness_union(self):
        rep = verify_polarized_ht(constant(0, colors=2), 2, [{2}, {8}], apart_base=2)
        assert rep.valid
        bad = verify_polarized_ht(constant(0, colors=2), 2, [{3}, {6}], apart_base=2)
        assert not bad.valid and bad.witness.kind == "apartness"

    def test_duplicate_parts_rejected(self):
        with pytest.raises(DomainError):
            verify_polarized_ht(PARITY, 2, [{2}, {2}], apart_base=2)


class TestPrincipleId:
    def test_describe(self):
        pid = PrincipleId("HT", 2, spec=AtMost(2), apartness=2)
        assert pid.describe() == "HT^{<=2}_2 with 2-apartness"
        assert PrincipleId("RT", 8, dimension=3).describe() == "RT^3_8"

    def test_validation(self):
        with pytest.raises(DomainError):
            PrincipleId("HT", 2)  # missing spec
        with pytest.raises(DomainError):
            PrincipleId("RT", 2, dimension=3, apartness=2)
        with pytest.raises(DomainError):
            PrincipleId("FUT", 2, spec=ExplicitLengths((1,)), apartness=2)

    def test_polarized_shape(self):
        with pytest.raises(DomainError):
            PolarizedSets((FiniteSet(), FiniteSet({1})))
