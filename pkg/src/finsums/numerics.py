"""Base-t digit arithmetic, finite sets, and sum/union enumeration.

Everything here is pure and immutable: the symbol layer the rest of the
package consumes.  All values live in the 64-bit unsigned range; any
operation whose result would leave it raises OverflowError rather than
returning a wrapped value.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .errors import DomainError

U64_MAX = 2**64 - 1


# ---------------------------------------------------------------------------
# digit profiles


@dataclass(frozen=True)
class DigitProfile:
    """Positional base-t representation of a positive integer.

    ``digits`` lists (exponent, coefficient) pairs with strictly
    increasing exponents and coefficients in [1, base-1].
    """

    value: int
    base: int
    digits: tuple[tuple[int, int], ...]

    @property
    def least_exponent(self) -> int:
        return self.digits[0][0]

    @property
    def greatest_exponent(self) -> int:
        return self.digits[-1][0]

    @property
    def least_coefficient(self) -> int:
        """Coefficient of the least term. Base 3 is the canonical use."""
        return self.digits[0][1]


def digit_profile(n: int, t: int) -> DigitProfile:
    """Decompose n >= 1 into its base-t digits, least exponent first."""
    if t < 2:
        raise DomainError(f"base must be >= 2, got {t}")
    if n < 1:
        raise DomainError(f"need a positive integer, got {n}")
    if n > U64_MAX:
        raise OverflowError(f"{n} exceeds the 64-bit unsigned range")
    digits = []
    e = 0
    while n:
        n, c = divmod(n, t)
        if c:
            digits.append((e, c))
        e += 1
    return DigitProfile(value=sum(c * t**e for e, c in digits), base=t, digits=tuple(digits))


def least_exponent(n: int, t: int) -> int:
    """Least base-t exponent of n (the lambda of the apartness condition)."""
    if t == 2:
        if n < 1:
            raise DomainError(f"need a positive integer, got {n}")
        return (n & -n).bit_length() - 1
    if t < 2:
        raise DomainError(f"base must be >= 2, got {t}")
    if n < 1:
        raise DomainError(f"need a positive integer, got {n}")
    e = 0
    while n % t == 0:
        n //= t
        e += 1
    return e


def greatest_exponent(n: int, t: int) -> int:
    """Greatest base-t exponent of n (the mu of the apartness condition)."""
    if t == 2:
        if n < 1:
            raise DomainError(f"need a positive integer, got {n}")
        return n.bit_length() - 1
    if t < 2:
        raise DomainError(f"base must be >= 2, got {t}")
    if n < 1:
        raise DomainError(f"need a positive integer, got {n}")
    e = -1
    while n:
        n //= t
        e += 1
    return e


def least_coefficient(n: int, t: int) -> int:
    """Coefficient of the least base-t term of n."""
    if t < 2:
        raise DomainError(f"base must be >= 2, got {t}")
    if n < 1:
        raise DomainError(f"need a positive integer, got {n}")
    while True:
        c = n % t
        if c:
            return c
        n //= t


# ---------------------------------------------------------------------------
# finite sets and length specifications


class FiniteSet(tuple):
    """Sorted duplicate-free tuple of non-negative integers."""

    def __new__(cls, elements: Iterable[int] = ()) -> "FiniteSet":
        elems = sorted(set(elements))
        # sortedness makes the first element the minimum, so one sign
        # check suffices; non-integers fail the sort or the comparison
        if elems and (not isinstance(elems[0], int) or elems[0] < 0):
            raise DomainError(f"finite sets hold non-negative integers, got {elems[0]!r}")
        return super().__new__(cls, elems)

    @classmethod
    def _from_sorted(cls, elems: list[int]) -> "FiniteSet":
        # internal: caller guarantees strictly increasing non-negatives
        return tuple.__new__(cls, elems)

    def __repr__(self) -> str:
        return "{" + ", ".join(str(x) for x in self) + "}"


@dataclass(frozen=True)
class AtMost:
    """Sums/unions of at most n parts (lengths 1..n)."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("AtMost needs n >= 1")


@dataclass(frozen=True)
class Exactly:
    """Sums/unions of exactly n parts."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("Exactly needs n >= 1")


@dataclass(frozen=True)
class ExplicitLengths:
    """Sums whose length lies in a fixed finite set."""

    lengths: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(sorted(set(self.lengths))))
        if not self.lengths or self.lengths[0] < 1:
            raise DomainError("lengths must be a non-empty set of integers >= 1")


@dataclass(frozen=True)
class ExactlyLarge:
    """Sums over exactly large subsets: |S| = min(S) + 1."""


@dataclass(frozen=True)
class AllUpTo:
    """All lengths up to a bound: finite-scale stand-in for unbounded FS."""

    bound: int

    def __post_init__(self):
        if self.bound < 1:
            raise DomainError("AllUpTo needs bound >= 1")


@dataclass(frozen=True)
class ExistsPair:
    """Descriptor for sums of some two lengths a < b, both to be found.

    Purely a principle label; enumeration happens only after a concrete
    pair has been produced, via ExplicitLengths."""


LengthSpec = AtMost | Exactly | ExplicitLengths | ExactlyLarge | AllUpTo | ExistsPair


def admissible_lengths(spec: LengthSpec, ground_size: int) -> tuple[int, ...]:
    """Lengths the spec admits on a ground set of the given size.

    ExactlyLarge has no fixed length and is handled by the enumerators.
    """
    if isinstance(spec, AtMost):
        return tuple(range(1, min(spec.n, ground_size) + 1))
    if isinstance(spec, Exactly):
        return (spec.n,) if spec.n <= ground_size else ()
    if isinstance(spec, ExplicitLengths):
        return tuple(j for j in spec.lengths if j <= ground_size)
    if isinstance(spec, AllUpTo):
        return tuple(range(1, min(spec.bound, ground_size) + 1))
    raise DomainError(f"no fixed lengths for {spec!r}")


def format_length_spec(spec: LengthSpec) -> str:
    if isinstance(spec, AtMost):
        return f"<={spec.n}"
    if isinstance(spec, Exactly):
        return f"={spec.n}"
    if isinstance(spec, ExplicitLengths):
        return "{" + ",".join(str(j) for j in spec.lengths) + "}"
    if isinstance(spec, ExactlyLarge):
        return "!w"
    if isinstance(spec, AllUpTo):
        return f"all<={spec.bound}"
    if isinstance(spec, ExistsPair):
        return "?{a<b}"
    raise DomainError(f"unknown length spec {spec!r}")


def parse_length_spec(text: str) -> LengthSpec:
    """Inverse of format_length_spec."""
    text = text.strip()
    if text == "!w":
        return ExactlyLarge()
    if text == "?{a<b}":
        return ExistsPair()
    if text.startswith("all<="):
        return AllUpTo(int(text[5:]))
    if text.startswith("<="):
        return AtMost(int(text[2:]))
    if text.startswith("="):
        return Exactly(int(text[1:]))
    if text.startswith("{") and text.endswith("}"):
        return ExplicitLengths(tuple(int(p) for p in text[1:-1].split(",")))
    raise DomainError(f"cannot parse length spec {text!r}")


# ---------------------------------------------------------------------------
# apartness and block sequences


def check_apart(members: Iterable[int], t: int) -> tuple[bool, tuple[int, int] | None]:
    """Check the t-apartness condition on a strictly increasing list.

    Returns (True, None) when every consecutive pair x < x' has
    mu_t(x) < lambda_t(x'), else (False, first offending pair).
    """
    ms = list(members)
    for a, b in zip(ms, ms[1:]):
        if a >= b:
            raise DomainError(f"members must be strictly increasing, got {a} before {b}")
    for a, b in zip(ms, ms[1:]):
        if greatest_exponent(a, t) >= least_exponent(b, t):
            return False, (a, b)
    return True, None


@dataclass(frozen=True)
class ApartSet:
    """Strictly increasing positive integers whose base-t exponent
    intervals do not intertwine."""

    base: int
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        ok, pair = check_apart(self.members, self.base)
        if not ok:
            raise DomainError(f"not {self.base}-apart at pair {pair}")

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


class BlockSequence(tuple):
    """Non-empty finite sets listed unmeshed: max(X_i) < min(X_{i+1})."""

    def __new__(cls, blocks: Iterable[Iterable[int]]) -> "BlockSequence":
        bs = tuple(b if isinstance(b, FiniteSet) else FiniteSet(b) for b in blocks)
        for b in bs:
            if not b:
                raise DomainError("blocks must be non-empty")
        for x, y in zip(bs, bs[1:]):
            if max(x) >= min(y):
                raise DomainError(f"blocks mesh: max{x!r} >= min{y!r}")
        return super().__new__(cls, bs)


# ---------------------------------------------------------------------------
# encoding between sets and integers


# support extraction takes several digits per division; level L of the
# base-t table maps c < t**width to the exponents, pre-offset by L*width,
# of c's nonzero base-t digits.  Tables build lazily per base, composed
# from a half-width seed so first use stays in the low milliseconds.
_SUPPORT_WIDTH = {2: 8, 3: 8, 5: 6}
_SUPPORT_TABLES: dict[int, tuple[int, int, list]] = {}


def _support_tables(t: int) -> tuple[int, int, list]:
    width = _SUPPORT_WIDTH[t]
    half = width // 2
    seed = []
    for c in range(t**half):
        offs = []
        v = c
        for off in range(half):
            v, d = divmod(v, t)
            if d:
                offs.append(off)
        seed.append(tuple(offs))
    shifted = [tuple(half + off for off in offs) for offs in seed]
    # value c = hi * t**half + lo, and lo runs fastest below
    base = [seed[lo] + shifted[hi] for hi in range(t**half) for lo in range(t**half)]
    levels = []
    shift = 0
    while t**shift <= U64_MAX:
        levels.append([tuple(shift + off for off in offs) for offs in base])
        shift += width
    cached = _SUPPORT_TABLES[t] = (t**width, (1 << width) - 1, levels)
    return cached


def support_set(n: int, t: int) -> FiniteSet:
    """Set of base-t exponents of n."""
    if n < 1:
        raise DomainError(f"need a positive integer, got {n}")
    if n > U64_MAX:
        raise OverflowError(f"{n} exceeds the 64-bit unsigned range")
    if t < 2:
        raise DomainError(f"base must be >= 2, got {t}")
    out: list[int] = []
    cached = _SUPPORT_TABLES.get(t)
    if cached is None and t in _SUPPORT_WIDTH:
        cached = _support_tables(t)
    if cached is not None:
        chunk, mask, levels = cached
        level = 0
        if t == 2:
            while n:
                out += levels[level][n & mask]
                n >>= 8
                level += 1
        else:
            while n:
                n, c = divmod(n, chunk)
                out += levels[level][c]
                level += 1
        return _tuple_new(FiniteSet, out)
    e = 0
    while n:
        n, c = divmod(n, t)
        if c:
            out.append(e)
        e += 1
    return _tuple_new(FiniteSet, out)


_tuple_new = tuple.__new__


# powers of the common bases, up to the 64-bit range
_POWS = {t: tuple(t**e for e in range(64) if t**e <= U64_MAX) for t in (2, 3, 5)}


def encode_set(s: Iterable[int], t: int) -> int:
    """Sum of t**e over e in s; inverse of support_set on its image."""
    if t < 2:
        raise DomainError(f"base must be >= 2, got {t}")
    elems = s if isinstance(s, tuple) else tuple(s)
    if not elems:
        raise DomainError("cannot encode the empty set")
    if min(elems) < 0:
        raise DomainError(f"exponents must be non-negative, got {min(elems)}")
    pows = _POWS.get(t)
    try:
        total = sum(map(pows.__getitem__, elems)) if pows else sum(t**e for e in elems)
    except IndexError:
        raise OverflowError("encoded value exceeds the 64-bit unsigned range") from None
    if total > U64_MAX:
        raise OverflowError("encoded value exceeds the 64-bit unsigned range")
    return total


def is_exactly_large(s: Iterable[int]) -> bool:
    """True iff |S| = min(S) + 1."""
    elems = s if isinstance(s, (tuple, list)) else tuple(s)
    if not elems:
        raise DomainError("the empty set is neither large nor small")
    return len(elems) == min(elems) + 1


def _checked_sum(parts: Iterable[int]) -> int:
    total = sum(parts)
    if total > U64_MAX:
        raise OverflowError("sum exceeds the 64-bit unsigned range")
    return total


def exactly_large_subsets(ground: Iterable[int]) -> Iterator[tuple[int, ...]]:
    """All subsets S of the ground set with |S| = min(S) + 1."""
    elems = sorted(set(ground))
    for i, m in enumerate(elems):
        if m < 1:
            raise DomainError("exactly large subsets need a ground set of positive integers")
        rest = elems[i + 1 :]
        if m > len(rest):
            continue
        for tail in combinations(rest, m):
            yield (m,) + tail


def enumerate_sums(ground: Iterable[int], spec: LengthSpec) -> FiniteSet:
    """FS^spec of the ground set: sums of distinct elements, deduplicated.

    Different subsets may collide on one sum; FS is a set of values.
    """
    elems = sorted(set(ground))
    if not elems:
        raise DomainError("ground set must be non-empty")
    if any(x < 1 for x in elems):
        raise DomainError("sums range over positive integers")
    sums = set()
    if isinstance(spec, ExactlyLarge):
        for subset in exactly_large_subsets(elems):
            sums.add(_checked_sum(subset))
    else:
        for j in admissible_lengths(spec, len(elems)):
            for subset in combinations(elems, j):
                sums.add(_checked_sum(subset))
    return FiniteSet(sums)


def enumerate_unions(blocks: BlockSequence, spec: LengthSpec) -> list[FiniteSet]:
    """All unions of j distinct blocks for each admissible length j."""
    if not isinstance(spec, (AtMost, Exactly)):
        raise DomainError(f"union enumeration supports AtMost/Exactly, got {spec!r}")
    if not blocks:
        raise DomainError("block sequence must be non-empty")
    out = []
    for j in admissible_lengths(spec, len(blocks)):
        for chosen in combinations(blocks, j):
            merged: list[int] = []
            for b in chosen:
                merged.extend(b)
            out.append(FiniteSet(merged))
    return out
