"""Categorial grammar categories over a configurable set of atoms.

Slash convention (Lambek): ``X/Y`` looks for a ``Y`` on its right and yields
``X``; ``Y\\X`` looks for a ``Y`` on its left and yields ``X``.  The concrete
syntax is non-associative, so ``S/N/N`` must be written ``(S/N)/N``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

__all__ = [
    "Atom",
    "Forward",
    "Backward",
    "Category",
    "GrammarSignature",
    "CategoryError",
    "CategoryParseError",
    "UnknownAtomError",
    "parse_category",
    "print_category",
    "forward_apply",
    "backward_apply",
    "type_raise",
    "is_modifier",
    "atoms_of",
    "depth",
]

ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")


class CategoryError(ValueError):
    pass


class CategoryParseError(CategoryError):
    """Malformed category notation; ``offset`` is the 0-based character position."""

    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at offset {offset} in {text!r}")
        self.text = text
        self.offset = offset


class UnknownAtomError(CategoryParseError):
    pass


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not ATOM_RE.fullmatch(self.name):
            raise CategoryError(f"invalid atom name {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Forward:
    """``result/argument``: consumes ``argument`` on the right."""

    result: "Category"
    argument: "Category"

    def __str__(self):
        return print_category(self)


@dataclass(frozen=True)
class Backward:
    """``argument\\result``: consumes ``argument`` on the left."""

    argument: "Category"
    result: "Category"

    def __str__(self):
        return print_category(self)


Category = Union[Atom, Forward, Backward]


@dataclass(frozen=True)
class GrammarSignature:
    """The primitive categories of a grammar and its designated sentence atom."""

    atoms: frozenset = field(default_factory=lambda: frozenset({"N", "S"}))
    sentence_atom: str = "S"

    def __post_init__(self):
        object.__setattr__(self, "atoms", frozenset(self.atoms))
        for name in self.atoms:
            Atom(name)
        if self.sentence_atom not in self.atoms:
            raise CategoryError(
                f"sentence atom {self.sentence_atom!r} not among atoms {sorted(self.atoms)}"
            )

    @property
    def sentence(self) -> Atom:
        return Atom(self.sentence_atom)

    def admits(self, category: Category) -> bool:
        return atoms_of(category) <= self.atoms


def _operand(c: Category) -> str:
    return c.name if isinstance(c, Atom) else f"({print_category(c)})"


def print_category(c: Category) -> str:
    if isinstance(c, Atom):
        return c.name
    if isinstance(c, Forward):
        return f"{_operand(c.result)}/{_operand(c.argument)}"
    if isinstance(c, Backward):
        return f"{_operand(c.argument)}\\{_operand(c.result)}"
    raise TypeError(f"not a category: {c!r}")


class _Parser:
    def __init__(self, text: str, sig: Optional[GrammarSignature]):
        self.text = text
        self.sig = sig
        self.pos = 0

    def error(self, message, offset=None, cls=CategoryParseError):
        return cls(message, self.text, self.pos if offset is None else offset)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Category:
        if not self.text:
            raise self.error("empty category")
        cat = self.category()
        if self.pos != len(self.text):
            ch = self.peek()
            if ch in "/\\":
                raise self.error("slashes do not associate; add parentheses")
            raise self.error(f"unexpected {ch!r}")
        return cat

    def category(self) -> Category:
        left = self.unit()
        ch = self.peek()
        if ch not in ("/", "\\"):
            return left
        self.pos += 1
        right = self.unit()
        if ch == "/":
            return Forward(left, right)
        return Backward(left, right)

    def unit(self) -> Category:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.category()
            if self.peek() != ")":
                if self.peek() in ("/", "\\"):
                    raise self.error("slashes do not associate; add parentheses")
                raise self.error("expected ')'")
            self.pos += 1
            return inner
        m = ATOM_RE.match(self.text, self.pos)
        if m is None:
            if not ch:
                raise self.error("unexpected end of category")
            raise self.error(f"unexpected {ch!r}")
        name = m.group()
        if self.sig is not None and name not in self.sig.atoms:
            raise self.error(f"unknown atom {name!r}", cls=UnknownAtomError)
        self.pos = m.end()
        return Atom(name)


def parse_category(text: str, sig: Optional[GrammarSignature] = None) -> Category:
    """Parse category notation such as ``(S\\S)/N``.

    With ``sig`` given, every atom must be declared in it.
    """
    return _Parser(text, sig).parse()


def forward_apply(f: Category, a: Category) -> Optional[Category]:
    if isinstance(f, Forward) and f.argument == a:
        return f.result
    return None


def backward_apply(a: Category, f: Category) -> Optional[Category]:
    if isinstance(f, Backward) and f.argument == a:
        return f.result
    return None


def type_raise(y: Category, x: Category) -> Category:
    """Forward type-raising ``Y => X/(Y\\X)``."""
    return Forward(x, Backward(y, x))


def is_modifier(c: Category) -> bool:
    """True for ``X/X`` and ``X\\X``."""
    return isinstance(c, (Forward, Backward)) and c.result == c.argument


def atoms_of(c: Category) -> frozenset:
    if isinstance(c, Atom):
        return frozenset({c.name})
    return atoms_of(c.result) | atoms_of(c.argument)


def depth(c: Category) -> int:
    if isinstance(c, Atom):
        return 0
    return 1 + max(depth(c.result), depth(c.argument))


def parse_categories(texts: Iterable[str], sig: Optional[GrammarSignature] = None):
    return tuple(parse_category(t, sig) for t in texts)
