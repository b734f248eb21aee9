"""Colorings of naturals, increasing tuples, and finite sets.

A coloring is either a Table (explicit finite map over a declared window,
optionally extended beyond it by a default rule) or a Rule drawn from a
closed, serializable catalog.  Rules are total on the 64-bit range, which
is what lets apart-set search evaluate them on arbitrary sums.

Rule values are integers; most rules are colorings proper (range [0, k)),
while the ``*-inj`` rules are injections used as decoder instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .errors import DomainError, WindowError
from .numerics import least_coefficient, least_exponent, greatest_exponent, support_set

NAT, PAIR, TRIPLE, SET = "nat", "pair", "triple", "set"
ARITIES = (NAT, PAIR, TRIPLE, SET)


@dataclass(frozen=True)
class Rule:
    """A node of the closed rule catalog: name, integer params, subrules."""

    name: str
    params: tuple[int, ...] = ()
    subs: tuple["Rule", ...] = ()

    def __post_init__(self):
        if self.name not in _KINDS:
            raise DomainError(f"unknown rule {self.name!r}")
        kind = _KINDS[self.name]
        if len(self.subs) != kind.nsubs:
            raise DomainError(f"rule {self.name} takes {kind.nsubs} subrule(s)")
        kind.validate(self.params)


@dataclass(frozen=True)
class _Kind:
    nsubs: int
    validate: Callable[[tuple[int, ...]], None]
    consume: Callable[[list[int]], tuple[int, ...]]  # pop params off a token list


def _fixed(n: int) -> _Kind:
    def validate(params):
        if len(params) != n:
            raise DomainError(f"expected {n} parameter(s), got {len(params)}")

    def consume(tokens):
        out = tuple(tokens[:n])
        del tokens[:n]
        return out

    return _Kind(0, validate, consume)


def _mapped() -> _Kind:
    """Params are (m, c_0, ..., c_{m-1}) with m >= 1."""

    def validate(params):
        if not params or params[0] < 1 or len(params) != params[0] + 1:
            raise DomainError("expected modulus m followed by m colors")

    def consume(tokens):
        m = tokens[0]
        out = tuple(tokens[: m + 1])
        del tokens[: m + 1]
        return out

    return _Kind(0, validate, consume)


def _base_mapped() -> _Kind:
    """Params are (t, m, c_0, ..., c_{m-1})."""

    def validate(params):
        if len(params) < 2 or params[0] < 2 or params[1] < 1 or len(params) != params[1] + 2:
            raise DomainError("expected base t, modulus m, then m colors")

    def consume(tokens):
        m = tokens[1]
        out = tuple(tokens[: m + 2])
        del tokens[: m + 2]
        return out

    return _Kind(0, validate, consume)


def _patch() -> _Kind:
    """Params are (p, a_1, v_1, ..., a_p, v_p)."""

    def validate(params):
        if not params or params[0] < 1 or len(params) != 2 * params[0] + 1:
            raise DomainError("expected override count then arg/value pairs")
        args = params[1::2]
        if len(set(args)) != len(args):
            raise DomainError("override arguments must be distinct")

    def consume(tokens):
        p = tokens[0]
        out = tuple(tokens[: 2 * p + 1])
        del tokens[: 2 * p + 1]
        return out

    return _Kind(1, validate, consume)


def _with_subs(kind: _Kind, nsubs: int) -> _Kind:
    return _Kind(nsubs, kind.validate, kind.consume)


_KINDS: dict[str, _Kind] = {
    # any arity
    "constant": _fixed(1),
    # nat -> color
    "mod": _mapped(),
    "digit-lam": _base_mapped(),
    "digit-mu": _base_mapped(),
    "digit-i": _base_mapped(),
    "important": _with_subs(_fixed(0), 1),
    "double": _with_subs(_fixed(1), 1),
    "pair-encode": _with_subs(_fixed(0), 1),
    "support": _with_subs(_fixed(1), 1),
    # nat -> nat injections
    "id-inj": _fixed(0),
    "shift-inj": _fixed(1),
    "even-inj": _fixed(0),
    "patch-inj": _patch(),
    # increasing pairs/triples -> color
    "pair-sum": _mapped(),
    "pair-diff": _mapped(),
    "pair-min": _mapped(),
    "pair-max": _mapped(),
    "tuple-sum": _with_subs(_fixed(0), 1),
    "prefix-bits": _with_subs(_fixed(0), 1),
    # finite sets -> color
    "set-size": _mapped(),
    "set-min": _mapped(),
    "set-max": _mapped(),
    "set-sum": _mapped(),
    "encode": _with_subs(_fixed(1), 1),
    "sum-rule": _with_subs(_fixed(0), 1),
}

INJECTION_RULES = frozenset({"id-inj", "shift-inj", "even-inj", "patch-inj"})


def rule_to_tokens(rule: Rule) -> list[str]:
    out = [rule.name, *map(str, rule.params)]
    for sub in rule.subs:
        out.extend(rule_to_tokens(sub))
    return out


def rule_from_tokens(tokens: list[str]) -> Rule:
    """Parse a rule from whitespace tokens; consumes exactly what it needs."""
    work = list(tokens)
    rule = _parse(work)
    if work:
        raise DomainError(f"trailing rule tokens: {work}")
    return rule


def _parse(work: list[str]) -> Rule:
    if not work:
        raise DomainError("unexpected end of rule tokens")
    name = work.pop(0)
    if name not in _KINDS:
        raise DomainError(f"unknown rule {name!r}")
    kind = _KINDS[name]
    ints = []
    for x in work:
        try:
            ints.append(int(x))
        except ValueError:
            break
    try:
        params = kind.consume(ints)
    except IndexError:
        raise DomainError(f"truncated parameters for rule {name}") from None
    del work[: len(params)]
    subs = tuple(_parse(work) for _ in range(kind.nsubs))
    return Rule(name, params, subs)


# ---------------------------------------------------------------------------
# evaluation


def is_injection_rule(rule: Rule) -> bool:
    return rule.name in INJECTION_RULES


def evaluate_injection(rule: Rule, a: int) -> int:
    """Evaluate an injection rule at a positive argument."""
    if a < 1:
        raise DomainError(f"injections take positive arguments, got {a}")
    return compile_injection(rule)(a)


def compile_injection(rule: Rule) -> Callable[[int], int]:
    if rule.name == "id-inj":
        return lambda a: a
    if rule.name == "shift-inj":
        c = rule.params[0]
        return lambda a: a + c
    if rule.name == "even-inj":
        return lambda a: 2 * a
    if rule.name == "patch-inj":
        base = compile_injection(rule.subs[0])
        overrides = dict(zip(rule.params[1::2], rule.params[2::2]))
        return lambda a: overrides.get(a, base(a))
    raise DomainError(f"{rule.name} is not an injection rule")


def injection_arg_bound(rule: Rule, x: int) -> int:
    """A bound B with f(a) > x for every argument a >= B.

    Exists for every catalog injection because each is eventually
    strictly increasing; this is what makes desk-scale range membership
    decidable exactly.
    """
    if rule.name == "id-inj":
        return x + 1
    if rule.name == "shift-inj":
        return max(1, x - rule.params[0] + 1)
    if rule.name == "even-inj":
        return x // 2 + 1
    if rule.name == "patch-inj":
        inner = injection_arg_bound(rule.subs[0], x)
        return max(inner, max(rule.params[1::2]) + 1)
    raise DomainError(f"{rule.name} is not an injection rule")


def injection_range_contains(rule: Rule, x: int) -> bool:
    """Ground truth: is x in the image of the injection (all arguments)?"""
    f = compile_injection(rule)
    return any(f(a) == x for a in range(1, injection_arg_bound(rule, x)))


def important_parity(inj: Callable[[int], int], n: int) -> int:
    """Parity of the count of important binary digit positions of n.

    Position j (0-based over the increasing exponents n_0 < ... < n_r,
    with n_{-1} := 0) is important when the injection takes a value below
    n_0 somewhere on arguments in [n_{j-1}, n_j).
    """
    exps = []
    m, e = n, 0
    while m:
        if m & 1:
            exps.append(e)
        m >>= 1
        e += 1
    n0 = exps[0]
    count = 0
    prev = 0
    for exp in exps:
        for a in range(max(1, prev), exp):
            if inj(a) < n0:
                count += 1
                break
        prev = exp
    return count & 1


def _compile_rule(rule: Rule, arity: str) -> Callable:
    name = rule.name
    if name == "constant":
        c = rule.params[0]
        return lambda _arg: c
    if name == "mod":
        m, mp = rule.params[0], rule.params[1:]
        return lambda n: mp[n % m]
    if name in ("digit-lam", "digit-mu", "digit-i"):
        t, m, mp = rule.params[0], rule.params[1], rule.params[2:]
        feat = {"digit-lam": least_exponent, "digit-mu": greatest_exponent, "digit-i": least_coefficient}[name]
        return lambda n: mp[feat(n, t) % m]
    if name == "important":
        inj = compile_injection(rule.subs[0])
        cache: dict[int, int] = {}

        def ev(n, _cache=cache, _inj=inj):
            v = _cache.get(n)
            if v is None:
                v = _cache[n] = important_parity(_inj, n)
            return v

        return ev
    if name == "double":
        return _compile_composite(name, rule.params, _compile_rule(rule.subs[0], NAT))
    if name == "pair-encode":
        return _compile_composite(name, rule.params, _compile_rule(rule.subs[0], PAIR))
    if name == "support":
        return _compile_composite(name, rule.params, _compile_rule(rule.subs[0], SET))
    if name in INJECTION_RULES:
        return compile_injection(rule)
    if name == "pair-sum":
        m, mp = rule.params[0], rule.params[1:]
        return lambda xy: mp[(xy[0] + xy[1]) % m]
    if name == "pair-diff":
        m, mp = rule.params[0], rule.params[1:]
        return lambda xy: mp[(xy[1] - xy[0]) % m]
    if name == "pair-min":
        m, mp = rule.params[0], rule.params[1:]
        return lambda xy: mp[xy[0] % m]
    if name == "pair-max":
        m, mp = rule.params[0], rule.params[1:]
        return lambda xy: mp[xy[1] % m]
    if name == "tuple-sum":
        return _compile_composite(name, rule.params, _compile_rule(rule.subs[0], NAT))
    if name == "prefix-bits":
        return _compile_composite(name, rule.params, _compile_rule(rule.subs[0], NAT))
    if name == "set-size":
        m, mp = rule.params[0], rule.params[1:]
        return lambda s: mp[len(s) % m]
    if name == "set-min":
        m, mp = rule.params[0], rule.params[1:]
        return lambda s: mp[s[0] % m]
    if name == "set-max":
        m, mp = rule.params[0], rule.params[1:]
        return lambda s: mp[s[-1] % m]
    if name == "set-sum":
        m, mp = rule.params[0], rule.params[1:]
        return lambda s: mp[sum(s) % m]
    if name == "encode":
        return _compile_composite(name, rule.params, _compile_rule(rule.subs[0], NAT))
    if name == "sum-rule":
        return _compile_composite(name, rule.params, _compile_rule(rule.subs[0], NAT))
    raise DomainError(f"no evaluator for rule {name!r}")


# composite kinds shared by Rule nesting and Derived bodies:
# kind -> (inner arity, outer arity or None when dimension-dependent)
COMPOSITE_KINDS = {
    "support": (SET, NAT),
    "encode": (NAT, SET),
    "pair-encode": (PAIR, NAT),
    "double": (NAT, NAT),
    "tuple-sum": (NAT, None),
    "prefix-bits": (NAT, TRIPLE),
    "sum-rule": (NAT, SET),
}


def _compile_composite(kind: str, params: tuple[int, ...], inner: Callable) -> Callable:
    if kind == "support":
        t = params[0]
        return lambda n: inner(tuple(support_set(n, t)))
    if kind == "encode":
        t = params[0]
        return lambda s: inner(sum(t**e for e in s))
    if kind == "pair-encode":
        return lambda n: 0 if n & (n - 1) == 0 else inner(((n & -n).bit_length() - 1, n.bit_length() - 1))
    if kind == "double":
        k = params[0]
        return lambda n: inner(n) + (0 if least_coefficient(n, 3) == 1 else k)
    if kind == "tuple-sum":
        return lambda xs: inner(sum(xs))
    if kind == "prefix-bits":

        def bits3(xs, _inner=inner):
            x1, x2, x3 = xs
            return 4 * _inner(x1) + 2 * _inner(x1 + x2) + _inner(x1 + x2 + x3)

        return bits3
    if kind == "sum-rule":
        return lambda s: inner(sum(s))
    raise DomainError(f"unknown composite kind {kind!r}")


def rule_color_bound(rule: Rule) -> int | None:
    """Upper bound on the colors a rule can produce, when derivable."""
    name = rule.name
    if name == "constant":
        return rule.params[0] + 1
    if name in ("mod", "pair-sum", "pair-diff", "pair-min", "pair-max",
                "set-size", "set-min", "set-max", "set-sum"):
        return max(rule.params[1:]) + 1
    if name in ("digit-lam", "digit-mu", "digit-i"):
        return max(rule.params[2:]) + 1
    if name == "important":
        return 2
    if name == "double":
        sub = rule_color_bound(rule.subs[0])
        return None if sub is None else rule.params[0] + sub
    if name == "prefix-bits":
        return 8
    if name in ("pair-encode", "support", "tuple-sum", "sum-rule", "encode"):
        sub = rule_color_bound(rule.subs[0])
        if sub is None:
            return None
        return max(sub, 1)
    if name in INJECTION_RULES:
        return None
    raise DomainError(f"unknown rule {name!r}")


# ---------------------------------------------------------------------------
# tables


def _in_window(arity: str, key, lo: int, hi: int) -> bool:
    if arity == NAT:
        return lo <= key <= hi
    return all(lo <= x <= hi for x in key)


def normalize_key(arity: str, key):
    if arity == NAT:
        if not isinstance(key, int):
            raise DomainError(f"nat colorings take integers, got {key!r}")
        return key
    key = tuple(key)
    if arity in (PAIR, TRIPLE):
        want = 2 if arity == PAIR else 3
        if len(key) != want or any(a >= b for a, b in zip(key, key[1:])):
            raise DomainError(f"{arity} colorings take increasing {want}-tuples, got {key!r}")
        return key
    if any(a >= b for a, b in zip(key, key[1:])):
        key = tuple(sorted(set(key)))
    if not key:
        raise DomainError("set colorings take non-empty sets")
    return key


@dataclass(frozen=True)
class Table:
    """Explicit finite coloring over a window [lo, hi] of ground values.

    Out-of-window arguments fall back to ``default`` when present and
    raise WindowError otherwise.
    """

    window: tuple[int, int]
    entries: tuple[tuple, ...]
    default: Rule | None = None
    _map: dict = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        lo, hi = self.window
        if lo > hi:
            raise DomainError(f"empty window {self.window}")
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))
        mp = {}
        for key, color in self.entries:
            if key in mp and mp[key] != color:
                raise DomainError(f"conflicting table entries for {key!r}")
            mp[key] = color
        object.__setattr__(self, "_map", mp)


@dataclass(frozen=True)
class Derived:
    """A coloring obtained from another coloring by a composite transform.

    This is how reduction forward maps wrap table-bodied instances; for
    rule-bodied instances the equivalent nested Rule is produced instead,
    keeping Rule-in/Rule-out totality."""

    kind: str
    params: tuple[int, ...]
    inner: "Coloring"

    def __post_init__(self):
        if self.kind not in COMPOSITE_KINDS:
            raise DomainError(f"unknown composite kind {self.kind!r}")
        want_in = COMPOSITE_KINDS[self.kind][0]
        if self.inner.arity != want_in:
            raise DomainError(f"{self.kind} wraps a {want_in} coloring, got {self.inner.arity}")


@dataclass(frozen=True)
class Coloring:
    """A k-coloring of the declared arity, given by a rule or a table."""

    arity: str
    colors: int
    body: Rule | Table | Derived

    def __post_init__(self):
        if self.arity not in ARITIES:
            raise DomainError(f"unknown arity {self.arity!r}")
        if self.colors < 1:
            raise DomainError("need at least one color")
        if isinstance(self.body, Rule):
            bound = rule_color_bound(self.body)
            if bound is not None and bound > self.colors:
                raise DomainError(f"rule can produce {bound} colors, declared {self.colors}")
        elif isinstance(self.body, Derived):
            out = COMPOSITE_KINDS[self.body.kind][1]
            if out is not None and out != self.arity:
                raise DomainError(f"{self.body.kind} produces a {out} coloring")
        else:
            for _key, color in self.body.entries:
                if not 0 <= color < self.colors:
                    raise DomainError(f"table color {color} outside [0, {self.colors})")
            if self.body.default is not None:
                bound = rule_color_bound(self.body.default)
                if bound is not None and bound > self.colors:
                    raise DomainError("default rule exceeds declared colors")

    def __call__(self, arg):
        return self.compiled()(normalize_key(self.arity, arg))

    def compiled(self) -> Callable:
        """Fast evaluator; callers pass already-normalized keys."""
        fn = _COMPILED.get(self)
        if fn is None:
            if len(_COMPILED) > 4096:
                _COMPILED.clear()
            fn = _COMPILED[self] = _compile_coloring(self)
        return fn


_COMPILED: dict[Coloring, Callable] = {}


def _compile_coloring(coloring: Coloring) -> Callable:
    body = coloring.body
    if isinstance(body, Rule):
        return _compile_rule(body, coloring.arity)
    if isinstance(body, Derived):
        return _compile_composite(body.kind, body.params, body.inner.compiled())
    lo, hi = body.window
    mp = body._map
    arity = coloring.arity
    fallback = None if body.default is None else _compile_rule(body.default, arity)
    if arity == NAT:
        def ev(n):
            if lo <= n <= hi:
                try:
                    return mp[n]
                except KeyError:
                    raise WindowError(f"no table entry for {n}") from None
            if fallback is None:
                raise WindowError(f"{n} outside table window [{lo}, {hi}]")
            return fallback(n)

        return ev

    def ev_tuple(key):
        if all(lo <= x <= hi for x in key):
            try:
                return mp[key]
            except KeyError:
                raise WindowError(f"no table entry for {key}") from None
        if fallback is None:
            raise WindowError(f"{key} outside table window [{lo}, {hi}]")
        return fallback(key)

    return ev_tuple


def eventually_constant(coloring: Coloring) -> tuple[int, int] | None:
    """(threshold T, color c) with coloring(n) = c for all n > T, if known.

    Only meaningful for nat colorings; lets the search engine collapse
    regions where every remaining sum is beyond T.
    """
    if coloring.arity != NAT:
        return None
    body = coloring.body
    if isinstance(body, Rule):
        if body.name == "constant":
            return (0, body.params[0])
        return None
    if isinstance(body, Derived):
        return None
    if body.default is not None and body.default.name == "constant":
        return (body.window[1], body.default.params[0])
    return None


def compose_coloring(
    kind: str, params: tuple[int, ...], inner: Coloring, arity: str, colors: int
) -> Coloring:
    """Wrap ``inner`` in a composite transform, staying a pure Rule when
    possible so that Rule instances stay Rules under reduction forwards."""
    if isinstance(inner.body, Rule):
        return Coloring(arity, colors, Rule(kind, params, (inner.body,)))
    return Coloring(arity, colors, Derived(kind, params, inner))


# ---------------------------------------------------------------------------
# convenience constructors


def constant(color: int, arity: str = NAT, colors: int | None = None) -> Coloring:
    return Coloring(arity, colors if colors is not None else max(1, color + 1), Rule("constant", (color,)))


def mod_rule(m: int, mapping: Iterable[int], colors: int | None = None) -> Coloring:
    mp = tuple(mapping)
    return Coloring(NAT, colors if colors is not None else max(mp) + 1, Rule("mod", (m, *mp)))


def digit_rule(t: int, which: str, m: int, mapping: Iterable[int], colors: int | None = None) -> Coloring:
    if which not in ("lam", "mu", "i"):
        raise DomainError("which must be lam, mu or i")
    mp = tuple(mapping)
    rule = Rule(f"digit-{which}", (t, m, *mp))
    return Coloring(NAT, colors if colors is not None else max(mp) + 1, rule)


def pair_rule(name: str, m: int, mapping: Iterable[int], colors: int | None = None) -> Coloring:
    mp = tuple(mapping)
    return Coloring(PAIR, colors if colors is not None else max(mp) + 1, Rule(name, (m, *mp)))


def set_rule(name: str, m: int, mapping: Iterable[int], colors: int | None = None) -> Coloring:
    mp = tuple(mapping)
    return Coloring(SET, colors if colors is not None else max(mp) + 1, Rule(name, (m, *mp)))


def identity_injection() -> Rule:
    return Rule("id-inj")


def shift_injection(c: int) -> Rule:
    return Rule("shift-inj", (c,))


def even_injection() -> Rule:
    return Rule("even-inj")


def patched_injection(overrides: Mapping[int, int], base: Rule) -> Rule:
    items = sorted(overrides.items())
    params = (len(items),) + tuple(x for kv in items for x in kv)
    return Rule("patch-inj", params, (base,))
