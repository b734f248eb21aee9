"""Deterministic instance catalogs for certification sweeps and demos."""

from __future__ import annotations

import random

from .coloring import (
    Coloring,
    Rule,
    constant,
    digit_rule,
    even_injection,
    identity_injection,
    mod_rule,
    pair_rule,
    patched_injection,
    set_rule,
    shift_injection,
)
from .numerics import ApartSet


def _spread_maps(m: int, limit: int) -> list[tuple[int, ...]]:
    """A deterministic spread of non-constant binary maps of length m."""
    out = []
    step = max(1, (2**m - 2) // limit)
    for idx in range(1, 2**m - 1, step):
        bits = tuple((idx >> i) & 1 for i in range(m))
        if len(set(bits)) == 2:
            out.append(bits)
    return out


def catalog_nat_colorings(k: int = 2) -> list[Coloring]:
    """At least 50 total rule colorings of the naturals into k colors."""
    out = [constant(c, colors=k) for c in range(min(k, 2))]
    for m in (2, 3, 4, 5, 6):
        for bits in _spread_maps(m, 8):
            out.append(mod_rule(m, bits, colors=k))
    for t in (2, 3):
        for which in ("lam", "mu", "i"):
            for m, mapping in ((2, (0, 1)), (3, (0, 1, 1)), (2, (1, 0))):
                out.append(digit_rule(t, which, m, mapping, colors=k))
    return out


def catalog_set_colorings(k: int = 2) -> list[Coloring]:
    """At least 50 rule colorings of finite sets into k colors."""
    out = [constant(c, arity="set", colors=k) for c in range(min(k, 2))]
    for name in ("set-size", "set-min", "set-max", "set-sum"):
        for m in (2, 3, 4):
            for bits in _spread_maps(m, 5):
                out.append(set_rule(name, m, bits, colors=k))
    return out


def catalog_pair_colorings(k: int = 2) -> list[Coloring]:
    """At least 50 rule colorings of increasing pairs into k colors."""
    out = [constant(c, arity="pair", colors=k) for c in range(min(k, 2))]
    for name in ("pair-sum", "pair-diff", "pair-min", "pair-max"):
        for m in (2, 3, 4):
            for bits in _spread_maps(m, 5):
                out.append(pair_rule(name, m, bits, colors=k))
    return out


def injection_catalog() -> list[tuple[str, Rule]]:
    """The decoder instances: identity, two shifts, the even enumerator,
    and one injection patched at a small argument (its range drops 4 and
    gains 1, so patching is visible to range queries)."""
    return [
        ("identity", identity_injection()),
        ("shift-3", shift_injection(3)),
        ("shift-10", shift_injection(10)),
        ("even", even_injection()),
        ("patched", patched_injection({1: 1}, shift_injection(3))),
    ]


def random_apart_sets(
    count: int = 20,
    size: int = 20,
    max_exponent: int = 21,
    seed: int = 20240001,
) -> list[ApartSet]:
    """Random 2-apart sets that start at 1 so exactly-large chunking has
    room for at least two complete chunks."""
    if size < 4 or max_exponent + 1 < size + 2:
        raise ValueError("need a few spare exponents beyond one per member")
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        slack = max_exponent + 1 - size
        members = []
        e = 0
        for i in range(size):
            width = 1
            # keep the two leading members at single exponents so the
            # first chunk is {1, 2} and the second always fits
            if i >= 2 and slack > 0 and rng.random() < slack / (size - i):
                width = 2
                slack -= 1
            if width == 1:
                members.append(2**e)
            else:
                members.append(2**e + 2 ** (e + 1))
            e += width
        out.append(ApartSet(2, tuple(members)))
    return out
