from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finsums.errors import DomainError
from finsums.numerics import (
    AllUpTo,
    ApartSet,
    AtMost,
    BlockSequence,
    Exactly,
    ExactlyLarge,
    ExplicitLengths,
    FiniteSet,
    U64_MAX,
    admissible_lengths,
    check_apart,
    digit_profile,
    encode_set,
    enumerate_sums,
    enumerate_unions,
    exactly_large_subsets,
    format_length_spec,
    greatest_exponent,
    is_exactly_large,
    least_coefficient,
    least_exponent,
    parse_length_spec,
    support_set,
)


def oracle_exactly_large_sums(ground):
    """Brute force over all subsets; independent of the library path."""
    elems = sorted(ground)
    out = set()
    for r in range(1, len(elems) + 1):
        for s in combinations(elems, r):
            if len(s) == min(s) + 1:
                out.add(sum(s))
    return sorted(out)


class TestDigitProfile:
    def test_12_base_2(self):
        p = digit_profile(12, 2)
        assert p.digits == ((2, 1), (3, 1))
        assert p.least_exponent == 2
        assert p.greatest_exponent == 3

    def test_5_base_3(self):
        p = digit_profile(5, 3)
        assert p.digits == ((0, 2), (1, 1))
        assert p.least_coefficient == 2

    def test_single_power(self):
        p = digit_profile(8, 2)
        assert p.digits == ((3, 1),)
        assert p.least_exponent == p.greatest_exponent == 3

    def test_rejects_zero_and_bad_base(self):
        with pytest.raises(DomainError):
            digit_profile(0, 2)
        with pytest.raises(DomainError):
            digit_profile(5, 1)

    def test_rejects_beyond_u64(self):
        with pytest.raises(OverflowError):
            digit_profile(U64_MAX + 1, 2)

    @given(st.integers(1, 10**6), st.sampled_from([2, 3]))
    def test_reconstruction(self, n, t):
        p = digit_profile(n, t)
        assert sum(c * t**e for e, c in p.digits) == n
        exps = [e for e, _ in p.digits]
        assert exps == sorted(set(exps))
        assert all(1 <= c < t for _, c in p.digits)

    @given(st.integers(1, 10**9), st.integers(2, 7))
    def test_lambda_mu_consistency(self, n, t):
        p = digit_profile(n, t)
        lam, mu = least_exponent(n, t), greatest_exponent(n, t)
        assert lam == p.least_exponent and mu == p.greatest_exponent
        assert lam <= mu
        assert (lam == mu) == (len(p.digits) == 1)
        assert least_coefficient(n, t) == p.least_coefficient


class TestSupportEncode:
    def test_support_examples(self):
        assert support_set(12, 2) == (2, 3)
        assert support_set(9, 3) == (2,)
        assert support_set(1, 2) == (0,)

    def test_encode_examples(self):
        assert encode_set({0, 3}, 2) == 9
        assert encode_set({2}, 3) == 9
        assert encode_set({1, 2, 4}, 2) == 22

    def test_encode_empty_rejected(self):
        with pytest.raises(DomainError):
            encode_set([], 2)

    def test_encode_overflow(self):
        with pytest.raises(OverflowError):
            encode_set({64}, 2)

    @given(
        st.sets(st.integers(0, 20), min_size=1),
        st.sampled_from([2, 3, 5]),
    )
    def test_roundtrip(self, s, t):
        assert support_set(encode_set(s, t), t) == FiniteSet(s)


class TestLengthSpecs:
    def test_parse_format_roundtrip(self):
        for spec in [AtMost(2), Exactly(3), ExplicitLengths((1, 3)), ExactlyLarge(), AllUpTo(4)]:
            assert parse_length_spec(format_length_spec(spec)) == spec

    def test_admissible(self):
        assert admissible_lengths(AtMost(3), 2) == (1, 2)
        assert admissible_lengths(Exactly(3), 2) == ()
        assert admissible_lengths(ExplicitLengths((1, 4)), 3) == (1,)
        assert admissible_lengths(AllUpTo(2), 5) == (1, 2)

    def test_invalid(self):
        with pytest.raises(DomainError):
            AtMost(0)
        with pytest.raises(DomainError):
            ExplicitLengths(())


class TestEnumerateSums:
    def test_at_most(self):
        assert enumerate_sums({1, 4, 16}, AtMost(2)) == (1, 4, 5, 16, 17, 20)

    def test_exactly(self):
        assert enumerate_sums({1, 2, 4}, Exactly(2)) == (3, 5, 6)

    def test_exactly_large_frozen(self):
        # frozen from oracle_exactly_large_sums: {1,2} -> 3, {1,8} -> 9;
        # {1,2,8} itself is not exactly large (min 1, size 3)
        assert enumerate_sums({1, 2, 8}, ExactlyLarge()) == (3, 9)

    @given(st.sets(st.integers(1, 24), min_size=1, max_size=8))
    def test_exactly_large_matches_oracle(self, ground):
        assert list(enumerate_sums(ground, ExactlyLarge())) == oracle_exactly_large_sums(ground)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            enumerate_sums({2**63 + 2, 2**63 - 1}, Exactly(2))

    @given(st.sets(st.integers(1, 10**4), min_size=1, max_size=8), st.integers(1, 4))
    def test_exact_cardinality_bound(self, ground, j):
        from math import comb

        sums = enumerate_sums(ground, Exactly(j))
        assert len(sums) <= comb(len(ground), j)

    def test_apart_ground_has_no_collisions(self):
        # distinct subsets of a 2-apart set have distinct sums, so the
        # C(|B|, j) bound is attained; exhaustive for |B| <= 8
        ground = [1, 2, 4, 8, 16, 32, 64, 128]
        from math import comb

        assert check_apart(ground, 2)[0]
        for j in range(1, 5):
            assert len(enumerate_sums(ground, Exactly(j))) == comb(8, j)


class TestEnumerateUnions:
    def test_exactly_two(self):
        b = BlockSequence([[1], [3, 4]])
        assert enumerate_unions(b, Exactly(2)) == [FiniteSet({1, 3, 4})]

    def test_at_most_two(self):
        b = BlockSequence([[1], [3]])
        assert enumerate_unions(b, AtMost(2)) == [
            FiniteSet({1}),
            FiniteSet({3}),
            FiniteSet({1, 3}),
        ]

    def test_three_blocks(self):
        b = BlockSequence([[0, 1], [5], [7, 9]])
        assert enumerate_unions(b, Exactly(2)) == [
            FiniteSet({0, 1, 5}),
            FiniteSet({0, 1, 7, 9}),
            FiniteSet({5, 7, 9}),
        ]

    def test_unsupported_spec(self):
        with pytest.raises(DomainError):
            enumerate_unions(BlockSequence([[1]]), ExactlyLarge())


class TestExactlyLarge:
    def test_examples(self):
        assert is_exactly_large({1, 2})
        assert is_exactly_large({2, 5, 9})
        assert not is_exactly_large({3, 4})

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            is_exactly_large(set())

    def test_subset_enumeration_respects_definition(self):
        for s in exactly_large_subsets([1, 2, 3, 4, 5, 6]):
            assert is_exactly_large(s)


class TestApartness:
    def test_examples(self):
        assert check_apart([3, 12], 2) == (True, None)
        assert check_apart([3, 6], 2) == (False, (3, 6))
        assert check_apart([2, 8, 32], 2) == (True, None)

    def test_non_increasing_rejected(self):
        with pytest.raises(DomainError):
            check_apart([5, 5], 2)
        with pytest.raises(DomainError):
            check_apart([8, 2], 2)

    @settings(max_examples=60)
    @given(st.data())
    def test_hereditary(self, data):
        # t-apartness is inherited by subsets
        exps = sorted(data.draw(st.sets(st.integers(0, 18), min_size=2, max_size=8)))
        members = [2**e for e in exps]
        assert check_apart(members, 2)[0]
        sub = data.draw(st.sets(st.sampled_from(members), min_size=1))
        assert check_apart(sorted(sub), 2)[0]

    def test_apart_set_type(self):
        a = ApartSet(2, (1, 2, 4))
        assert list(a) == [1, 2, 4]
        with pytest.raises(DomainError):
            ApartSet(2, (3, 6))


class TestBlockSequence:
    def test_meshed_rejected(self):
        with pytest.raises(DomainError):
            BlockSequence([[1, 5], [3]])
        with pytest.raises(DomainError):
            BlockSequence([[1], []])

    def test_finite_set_normalizes(self):
        assert FiniteSet([3, 1, 1, 2]) == (1, 2, 3)
        with pytest.raises(DomainError):
            FiniteSet([-1])
