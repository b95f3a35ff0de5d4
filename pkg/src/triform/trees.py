"""Phrase-structure trees whose constituents may be discontinuous."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional

__all__ = ["PhraseNode", "PhraseTree", "PSGRule", "parse_psg_rule", "is_interval"]


def is_interval(tokens) -> bool:
    tokens = set(tokens)
    return bool(tokens) and max(tokens) - min(tokens) + 1 == len(tokens)


@dataclass(frozen=True)
class PSGRule:
    lhs: str
    rhs: tuple

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))
        if not self.rhs:
            raise ValueError(f"rule for {self.lhs!r} has an empty right-hand side")

    def __str__(self):
        return f"{self.lhs} -> {' '.join(self.rhs)}"


def parse_psg_rule(text: str) -> PSGRule:
    m = re.match(r"^\s*(\S+)\s*(?:->|→)\s*(.+?)\s*$", text)
    if not m:
        raise ValueError(f"malformed rule {text!r}")
    return PSGRule(m.group(1), tuple(m.group(2).split()))


@dataclass(frozen=True)
class PhraseNode:
    """A labeled node.  Leaves carry ``leaf`` (token index) and ``word``.

    ``tokens`` is the yield.  Children are kept in the order the tree was
    built with; for continuous trees that is linear order.
    """

    label: str
    children: tuple = ()
    leaf: Optional[int] = None
    word: Optional[str] = None
    tokens: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if self.leaf is not None:
            if self.children:
                raise ValueError("a leaf has no children")
            object.__setattr__(self, "tokens", frozenset({self.leaf}))
        else:
            if not self.children:
                raise ValueError(f"internal node {self.label!r} needs children")
            object.__setattr__(
                self, "tokens", frozenset().union(*(c.tokens for c in self.children))
            )

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None

    @property
    def tangled(self) -> bool:
        return not is_interval(self.tokens)

    def nodes(self) -> Iterator["PhraseNode"]:
        yield self
        for c in self.children:
            yield from c.nodes()

    def internal_nodes(self) -> list:
        return [n for n in self.nodes() if not n.is_leaf]

    def tangled_nodes(self) -> list:
        return [n for n in self.internal_nodes() if n.tangled]

    def leaves(self) -> list:
        return [n for n in self.nodes() if n.is_leaf]

    def rules(self) -> Counter:
        """Productions of all internal nodes (lexical leaves excluded), with multiplicity."""
        return Counter(
            PSGRule(n.label, tuple(c.label for c in n.children)) for n in self.internal_nodes()
        )

    def grammar(self) -> set:
        return set(self.rules())


PhraseTree = PhraseNode
