"""Line-oriented text formats for instances and solutions.

All files are UTF-8 with \\n newlines and carry a one-line versioned
header.  Writers emit a canonical form (sorted entries, single spaces) so
that parse/format round-trips are bit-exact.
"""

from __future__ import annotations

from .coloring import Coloring, Derived, NAT, PAIR, Rule, SET, Table, rule_from_tokens, rule_to_tokens
from .errors import DomainError
from .numerics import ApartSet, BlockSequence, FiniteSet
from .principles import PolarizedSets
from .reductions import ExistsPairSolution

FORMAT_VERSION = "v1"


# ---------------------------------------------------------------------------
# colorings


def format_coloring(c: Coloring) -> str:
    return "\n".join(_coloring_lines(c)) + "\n"


def _coloring_lines(c: Coloring) -> list[str]:
    lines = [f"coloring {FORMAT_VERSION} {c.arity} {c.colors}"]
    body = c.body
    if isinstance(body, Rule):
        lines.append("rule " + " ".join(rule_to_tokens(body)))
    elif isinstance(body, Derived):
        lines.append(f"derived {body.kind} " + " ".join(map(str, body.params)))
        lines.extend(_coloring_lines(body.inner))
    else:
        lines.append(f"table {body.window[0]} {body.window[1]}")
        if body.default is not None:
            lines.append("default " + " ".join(rule_to_tokens(body.default)))
        for key, color in body.entries:
            lines.append(f"entry {_format_key(c.arity, key)} {color}")
    return lines


def _format_key(arity: str, key) -> str:
    if arity == NAT:
        return str(key)
    if arity == SET:
        return ",".join(map(str, key))
    return " ".join(map(str, key))


def _parse_key(arity: str, tokens: list[str]):
    if arity == NAT:
        if len(tokens) != 1:
            raise DomainError(f"nat entries take one key token, got {tokens}")
        return int(tokens[0])
    if arity == SET:
        if len(tokens) != 1:
            raise DomainError(f"set entries take one comma-joined token, got {tokens}")
        return tuple(int(p) for p in tokens[0].split(","))
    want = 2 if arity == PAIR else 3
    if len(tokens) != want:
        raise DomainError(f"{arity} entries take {want} key tokens, got {tokens}")
    return tuple(int(p) for p in tokens)


def parse_coloring(text: str) -> Coloring:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    coloring, rest = _parse_coloring_lines(lines)
    if rest:
        raise DomainError(f"trailing content after coloring: {rest[0]!r}")
    return coloring


def _parse_coloring_lines(lines: list[str]) -> tuple[Coloring, list[str]]:
    if not lines:
        raise DomainError("empty coloring file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "coloring":
        raise DomainError(f"bad coloring header: {lines[0]!r}")
    if head[1] != FORMAT_VERSION:
        raise DomainError(f"unsupported format version {head[1]!r}")
    arity, colors = head[2], int(head[3])
    if len(lines) < 2:
        raise DomainError("coloring file has no body")
    body_head = lines[1].split()
    if body_head[0] == "rule":
        return Coloring(arity, colors, rule_from_tokens(body_head[1:])), lines[2:]
    if body_head[0] == "derived":
        kind = body_head[1]
        params = tuple(int(p) for p in body_head[2:])
        inner, rest = _parse_coloring_lines(lines[2:])
        return Coloring(arity, colors, Derived(kind, params, inner)), rest
    if body_head[0] == "table":
        lo, hi = int(body_head[1]), int(body_head[2])
        default = None
        entries = []
        i = 2
        if i < len(lines) and lines[i].startswith("default "):
            default = rule_from_tokens(lines[i].split()[1:])
            i += 1
        while i < len(lines) and lines[i].startswith("entry "):
            tokens = lines[i].split()[1:]
            key = _parse_key(arity, tokens[:-1])
            entries.append((key, int(tokens[-1])))
            i += 1
        table = Table(window=(lo, hi), entries=tuple(entries), default=default)
        return Coloring(arity, colors, table), lines[i:]
    raise DomainError(f"unknown coloring body: {lines[1]!r}")


# ---------------------------------------------------------------------------
# solutions


def format_solution(solution, claimed_color: int | None = None) -> str:
    lines: list[str]
    if isinstance(solution, ApartSet):
        lines = [
            f"solution {FORMAT_VERSION} apart {solution.base}",
            "members " + " ".join(map(str, solution.members)),
        ]
    elif isinstance(solution, ExistsPairSolution):
        lines = [
            f"solution {FORMAT_VERSION} apart {solution.members.base}",
            "members " + " ".join(map(str, solution.members.members)),
            f"lengths {solution.lengths[0]} {solution.lengths[1]}",
        ]
    elif isinstance(solution, BlockSequence):
        lines = [f"solution {FORMAT_VERSION} blocks"]
        lines.extend("block " + " ".join(map(str, b)) for b in solution)
    elif isinstance(solution, PolarizedSets):
        lines = [f"solution {FORMAT_VERSION} polarized"]
        lines.extend("part " + " ".join(map(str, p)) for p in solution.parts)
    else:
        lines = [
            f"solution {FORMAT_VERSION} plain",
            "members " + " ".join(map(str, sorted(solution))),
        ]
    if claimed_color is not None:
        lines.append(f"color {claimed_color}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> tuple[object, int | None]:
    """Returns (solution, claimed color or None)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty solution file")
    head = lines[0].split()
    if len(head) < 3 or head[0] != "solution":
        raise DomainError(f"bad solution header: {lines[0]!r}")
    if head[1] != FORMAT_VERSION:
        raise DomainError(f"unsupported format version {head[1]!r}")
    shape = head[2]
    color = None
    body = []
    lengths = None
    for ln in lines[1:]:
        tokens = ln.split()
        if tokens[0] == "color":
            color = int(tokens[1])
        elif tokens[0] == "lengths":
            lengths = (int(tokens[1]), int(tokens[2]))
        else:
            body.append(tokens)
    if shape == "plain":
        members = _single_members(body)
        return FiniteSet(members), color
    if shape == "apart":
        base = int(head[3])
        members = _single_members(body)
        apart = ApartSet(base, tuple(members))
        if lengths is not None:
            return ExistsPairSolution(apart, lengths), color
        return apart, color
    if shape == "blocks":
        blocks = []
        for tokens in body:
            if tokens[0] != "block":
                raise DomainError(f"expected block lines, got {tokens[0]!r}")
            blocks.append([int(x) for x in tokens[1:]])
        return BlockSequence(blocks), color
    if shape == "polarized":
        parts = []
        for tokens in body:
            if tokens[0] != "part":
                raise DomainError(f"expected part lines, got {tokens[0]!r}")
            parts.append(FiniteSet(int(x) for x in tokens[1:]))
        return PolarizedSets(tuple(parts)), color
    raise DomainError(f"unknown solution shape {shape!r}")


def _single_members(body: list[list[str]]) -> list[int]:
    if len(body) != 1 or body[0][0] != "members":
        raise DomainError("expected exactly one members line")
    return [int(x) for x in body[0][1:]]
