"""Unlabeled dependency trees over token positions 1..n.

Covers validation, depth valuation, projectivity, conformance to
head/left/right dependency rules, and enumeration of dependency
constituents (connected subgraphs).
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

__all__ = [
    "DependencyGraph",
    "DependencyError",
    "MultipleHeadsError",
    "MultipleRootsError",
    "CycleError",
    "DisconnectedError",
    "InvalidRootError",
    "CrossingReport",
    "DependencyRule",
    "Conformance",
    "validate",
    "graph_from_heads",
    "delta",
    "projectivity",
    "conforms",
    "parse_dependency_rule",
    "dependency_constituents",
    "read_tabular",
    "write_tabular",
    "MAX_CONSTITUENT_TOKENS",
]

MAX_CONSTITUENT_TOKENS = 20


class DependencyError(ValueError):
    pass


class MultipleHeadsError(DependencyError):
    pass


class MultipleRootsError(DependencyError):
    pass


class CycleError(DependencyError):
    pass


class DisconnectedError(DependencyError):
    pass


class InvalidRootError(DependencyError):
    pass


@dataclass(frozen=True)
class DependencyGraph:
    """A validated dependency tree; build it with :func:`validate`."""

    n: int
    edges: frozenset
    root: int

    @property
    def heads(self) -> dict:
        """Map dependent -> head (the root maps to 0)."""
        heads = {d: h for h, d in self.edges}
        heads[self.root] = 0
        return heads

    def head_list(self) -> list:
        heads = self.heads
        return [heads[i] for i in range(1, self.n + 1)]

    def dependents(self, head: int) -> list:
        return sorted(d for h, d in self.edges if h == head)

    def children_map(self) -> dict:
        children = defaultdict(list)
        for h, d in sorted(self.edges):
            children[h].append(d)
        return children

    def descendants(self, node: int) -> set:
        children = self.children_map()
        seen, stack = set(), [node]
        while stack:
            for c in children.get(stack.pop(), ()):
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen


def validate(n: int, edges: Iterable, root: int) -> DependencyGraph:
    """Check that ``edges`` (head, dependent) form a tree over 1..n rooted at ``root``."""
    edges = frozenset((int(h), int(d)) for h, d in edges)
    if n < 1:
        raise DependencyError("a dependency graph needs at least one token")
    if not 1 <= root <= n:
        raise InvalidRootError(f"root {root} outside 1..{n}")
    head_of: dict = {}
    for h, d in sorted(edges):
        for i in (h, d):
            if not 1 <= i <= n:
                raise DependencyError(f"edge ({h}, {d}) refers to token {i} outside 1..{n}")
        if h == d:
            raise CycleError(f"self-loop on token {h}")
        if d in head_of:
            raise MultipleHeadsError(f"token {d} has heads {head_of[d]} and {h}")
        head_of[d] = h

    for start in range(1, n + 1):
        path = [start]
        node = start
        while node in head_of:
            node = head_of[node]
            if node in path:
                cycle = path[path.index(node):]
                raise CycleError(f"cycle through tokens {sorted(cycle)}")
            path.append(node)

    if root in head_of:
        raise InvalidRootError(f"declared root {root} has head {head_of[root]}")
    headless = [i for i in range(1, n + 1) if i not in head_of]
    if len(headless) > 1:
        stray = [i for i in headless if i != root]
        raise DisconnectedError(f"tokens {stray} are not connected to root {root}")
    return DependencyGraph(n, edges, root)


def graph_from_heads(heads: Sequence[int]) -> DependencyGraph:
    """Build a graph from a head column (0 marks the root)."""
    roots = [i for i, h in enumerate(heads, 1) if h == 0]
    if not roots:
        raise MultipleRootsError("no token has head 0")
    if len(roots) > 1:
        raise MultipleRootsError(f"tokens {roots} all have head 0")
    edges = [(h, i) for i, h in enumerate(heads, 1) if h != 0]
    return validate(len(heads), edges, roots[0])


def delta(g: DependencyGraph, offset: int = 0) -> dict:
    """Depth of every token below the root; the root gets ``offset``."""
    children = g.children_map()
    values = {g.root: offset}
    stack = [g.root]
    while stack:
        h = stack.pop()
        for d in children.get(h, ()):
            values[d] = values[h] + 1
            stack.append(d)
    return values


@dataclass(frozen=True)
class CrossingReport:
    """``crossings`` holds pairs of edges whose spans interleave; the root's
    projection line is represented by the pseudo-edge ``(0, root)``."""

    projective: bool
    non_projective_edges: frozenset
    crossings: frozenset


def _crosses(e1, e2) -> bool:
    a, b = sorted(e1)
    c, d = sorted(e2)
    return a < c < b < d or c < a < d < b


def projectivity(g: DependencyGraph) -> CrossingReport:
    bad = set()
    for h, d in g.edges:
        below = g.descendants(h)
        lo, hi = min(h, d), max(h, d)
        if any(k not in below for k in range(lo + 1, hi)):
            bad.add((h, d))
    lines = sorted(g.edges | {(0, g.root)})
    crossings = {
        (e1, e2)
        for i, e1 in enumerate(lines)
        for e2 in lines[i + 1:]
        if _crosses(e1, e2)
    }
    return CrossingReport(not bad, frozenset(bad), frozenset(crossings))


_DIGITS = re.compile(r"\d+$")


def _same_class(rule_label: str, pos: str) -> bool:
    if rule_label == "*" or rule_label == pos:
        return True
    return _DIGITS.sub("", rule_label) == _DIGITS.sub("", pos)


@dataclass(frozen=True)
class DependencyRule:
    """``head(left... * right...)``.  Both lists empty is the leaf rule ``X(*)``.

    Labels match a part of speech literally or up to a trailing index, so the
    rule label ``N1`` matches the tag ``N``; the head label ``*`` matches any.
    """

    head_label: str
    left_deps: tuple = ()
    right_deps: tuple = ()

    def __str__(self):
        left = " ".join(self.left_deps)
        right = ", ".join(self.right_deps)
        inner = "*"
        if left:
            inner = f"{left} {inner}"
        if right:
            inner = f"{inner} {right}"
        return f"{self.head_label}({inner})"

    def matches(self, pos: str, left: Sequence[str], right: Sequence[str]) -> bool:
        return (
            _same_class(self.head_label, pos)
            and len(left) == len(self.left_deps)
            and len(right) == len(self.right_deps)
            and all(_same_class(r, p) for r, p in zip(self.left_deps, left))
            and all(_same_class(r, p) for r, p in zip(self.right_deps, right))
        )


_RULE_RE = re.compile(r"^\s*([^\s(]+)\s*\((.*)\)\s*$")


def parse_dependency_rule(text: str) -> DependencyRule:
    """Parse ``V(N1 * N2, Adv)`` or ``I(*)``; dependents split on commas or spaces."""
    m = _RULE_RE.match(text)
    if not m or m.group(2).count("*") != 1:
        raise ValueError(f"malformed dependency rule {text!r}")
    left, right = m.group(2).split("*")
    split = lambda s: tuple(x for x in re.split(r"[\s,]+", s) if x)
    return DependencyRule(m.group(1), split(left), split(right))


class Conformance(NamedTuple):
    ok: bool
    violation: Optional[str]


def conforms(g: DependencyGraph, pos: Sequence[str], rules: Iterable[DependencyRule]) -> Conformance:
    """Check every token's ordered left/right dependents against ``rules``.

    ``pos`` lists the tags of tokens 1..n.
    """
    rules = list(rules)
    children = g.children_map()
    for i in range(1, g.n + 1):
        deps = children.get(i, [])
        left = [pos[d - 1] for d in deps if d < i]
        right = [pos[d - 1] for d in deps if d > i]
        if not any(r.matches(pos[i - 1], left, right) for r in rules):
            shown = DependencyRule(pos[i - 1], tuple(left), tuple(right))
            return Conformance(False, f"token {i} has frame {shown} matched by no rule")
    return Conformance(True, None)


def _is_interval(tokens) -> bool:
    return max(tokens) - min(tokens) + 1 == len(tokens)


def dependency_constituents(g: DependencyGraph) -> set:
    """All connected token sets of the tree, each paired with a continuity flag."""
    if g.n > MAX_CONSTITUENT_TOKENS:
        raise DependencyError(
            f"refusing to enumerate constituents of {g.n} tokens (limit {MAX_CONSTITUENT_TOKENS})"
        )
    children = g.children_map()
    rooted: dict = {}

    def topped_at(v):
        # connected sets whose highest node is v
        if v not in rooted:
            options = [[frozenset()] + topped_at(c) for c in children.get(v, ())]
            sets = []
            for combo in product(*options):
                sets.append(frozenset({v}).union(*combo))
            rooted[v] = sets
        return rooted[v]

    return {(s, _is_interval(s)) for v in range(1, g.n + 1) for s in topped_at(v)}


def read_tabular(text: str) -> list:
    """Read ``INDEX<TAB>FORM<TAB>POS<TAB>HEAD`` blocks separated by blank lines.

    Returns a list of ``(rows, graph)`` where rows are ``(form, pos)`` pairs.
    """
    out, block = [], []

    def flush(lineno):
        if not block:
            return
        rows, heads = [], []
        for k, (no, cols) in enumerate(block, 1):
            if int(cols[0]) != k:
                raise DependencyError(f"line {no}: expected index {k}, found {cols[0]}")
            rows.append((cols[1], cols[2]))
            heads.append(int(cols[3]))
        out.append((rows, graph_from_heads(heads)))
        block.clear()

    for no, line in enumerate(text.splitlines(), 1):
        if line.startswith("#"):
            continue
        if not line.strip():
            flush(no)
            continue
        cols = line.split("\t")
        if len(cols) != 4 or not cols[0].isdigit() or not cols[3].isdigit():
            raise DependencyError(f"line {no}: expected INDEX, FORM, POS, HEAD separated by tabs")
        block.append((no, cols))
    flush(None)
    return out


def write_tabular(rows: Sequence, g: DependencyGraph) -> str:
    heads = g.heads
    lines = [f"{i}\t{form}\t{pos}\t{heads[i]}" for i, (form, pos) in enumerate(rows, 1)]
    return "\n".join(lines) + "\n\n"
