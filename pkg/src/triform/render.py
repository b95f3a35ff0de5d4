"""Plain-text renderings: derivation grids, bracketed trees, tabular
dependencies, DOT graphs and correspondence reports.  All output is
deterministic."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Iterable, Optional

from .categories import GrammarSignature, print_category
from .correspondence import ProjectionMap, cg_to_dg, cg_to_psg
from .dependency import DependencyGraph, write_tabular
from .derivation import Derivation
from .trees import PhraseNode

__all__ = [
    "FORMATS",
    "RenderOptions",
    "render",
    "render_derivation_table",
    "render_bracketed",
    "parse_bracketed",
    "render_dependency_tabular",
    "render_dot",
    "render_correspondence_report",
    "to_ascii",
]

FORMATS = ("table", "bracket", "tabular", "dot", "report")

_ASCII = {
    "ə": "e",
    "ɔ": "o",
    "χ": "x",
    "ʷ": "w",
    "ˡ": "l",
    "ʔ": "?",
    "Ø": "0",
    "ø": "0",
    "∅": "0",
    "≡": "==",
    "⟨": "<",
    "⟩": ">",
    "→": "->",
    "’": "'",
    "‘": "'",
}


def to_ascii(text: str) -> str:
    out = []
    for ch in text:
        if ord(ch) < 128:
            out.append(ch)
        elif ch in _ASCII:
            out.append(_ASCII[ch])
        else:
            base = "".join(c for c in unicodedata.normalize("NFKD", ch) if not unicodedata.combining(c))
            out.append(base if base and all(ord(c) < 128 for c in base) else "?")
    return "".join(out)


@dataclass(frozen=True)
class RenderOptions:
    format: str = "tabular"
    show_indices: bool = False
    unicode_ok: bool = True

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}; choose from {', '.join(FORMATS)}")


def _finish(text: str, unicode_ok: bool) -> str:
    return text if unicode_ok else to_ascii(text)


def _words(sentence, n):
    tokens = getattr(sentence, "tokens", None)
    if tokens is None:
        return [str(i) for i in range(1, n + 1)], [None] * n
    return [t.form for t in tokens], [t.pos for t in tokens]


def render_derivation_table(d: Derivation, unicode_ok: bool = True) -> str:
    """Grid with one column per word and one ``Step k`` row per step.

    Row k shows the constituents present before step k, each category in the
    column of the word that carries it.  A last row shows the result.
    """
    forms, pos = _words(d.sentence, d.n)
    header = [f"{f}({p})" if p else f for f, p in zip(forms, pos)]
    stages = d.stages()
    rows = []
    for k, state in enumerate(stages[:-1], 1):
        cells = [""] * d.n
        for c in state:
            cells[c.anchor - 1] = print_category(c.category)
        rows.append((f"Step {k}:", cells))
    if d.steps:
        cells = [""] * d.n
        cells[d.final.anchor - 1] = print_category(d.final.category)
        rows.append(("Result:", cells))

    label_w = max([len(label) for label, _ in rows] + [0])
    widths = [
        max([len(header[i])] + [len(cells[i]) for _, cells in rows]) for i in range(d.n)
    ]

    def line(label, cells):
        parts = ([label.ljust(label_w)] if label_w else []) + [c.ljust(w) for c, w in zip(cells, widths)]
        return "  ".join(parts).rstrip()

    out = [line("", header)] + [line(label, cells) for label, cells in rows]
    return _finish("\n".join(out) + "\n", unicode_ok)


def _indices(tokens) -> str:
    return "⟨" + ",".join(str(i) for i in sorted(tokens)) + "⟩"


def render_bracketed(t: PhraseNode, show_indices: bool = False, unicode_ok: bool = True) -> str:
    """``[S [NP [N John]] ...]``; with crossings (or ``show_indices``) internal
    labels carry their yields, ``[NP⟨1,2,6⟩ ...]``, and leaves their index,
    ``[N 2:kuḷa-ji]``."""
    indexed = show_indices or bool(t.tangled_nodes())

    def walk(node):
        if node.is_leaf:
            word = node.word if node.word is not None else str(node.leaf)
            return f"[{node.label} {node.leaf}:{word}]" if indexed else f"[{node.label} {word}]"
        label = node.label + (_indices(node.tokens) if indexed else "")
        return f"[{label} " + " ".join(walk(c) for c in node.children) + "]"

    return _finish(walk(t), unicode_ok)


_BRACKET_TOKEN = re.compile(r"\[|\]|[^\s\[\]]+")
_INDEXED_LABEL = re.compile(r"^(.+?)(?:⟨|<)([0-9,]+)(?:⟩|>)$")
_INDEXED_WORD = re.compile(r"^(\d+):(.+)$")


def parse_bracketed(text: str) -> PhraseNode:
    """Inverse of :func:`render_bracketed` (either output style).

    Leaves without an explicit index are numbered left to right from 1.
    """
    toks = _BRACKET_TOKEN.findall(text)
    pos = 0
    counter = [0]

    def expect(tok):
        nonlocal pos
        if pos >= len(toks) or toks[pos] != tok:
            found = toks[pos] if pos < len(toks) else "end of input"
            raise ValueError(f"expected {tok!r}, found {found!r}")
        pos += 1

    def node():
        nonlocal pos
        expect("[")
        if pos >= len(toks) or toks[pos] in "[]":
            raise ValueError("bracket without a label")
        label = toks[pos]
        pos += 1
        m = _INDEXED_LABEL.match(label)
        declared = None
        if m:
            label, declared = m.group(1), frozenset(int(x) for x in m.group(2).split(","))
        if pos < len(toks) and toks[pos] not in "[]":
            word = toks[pos]
            pos += 1
            expect("]")
            wm = _INDEXED_WORD.match(word)
            if wm:
                leaf, word = int(wm.group(1)), wm.group(2)
            else:
                counter[0] += 1
                leaf = counter[0]
            return PhraseNode(label, leaf=leaf, word=word)
        children = []
        while pos < len(toks) and toks[pos] == "[":
            children.append(node())
        expect("]")
        built = PhraseNode(label, tuple(children))
        if declared is not None and declared != built.tokens:
            raise ValueError(f"{label} declares yield {sorted(declared)} but covers {sorted(built.tokens)}")
        return built

    tree = node()
    if pos != len(toks):
        raise ValueError(f"trailing input after tree: {toks[pos]!r}")
    return tree


def render_dependency_tabular(g: DependencyGraph, sentence=None, unicode_ok: bool = True) -> str:
    forms, pos = _words(sentence, g.n)
    rows = [(f, p if p is not None else "_") for f, p in zip(forms, pos)]
    return _finish(write_tabular(rows, g).rstrip("\n") + "\n", unicode_ok)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(obj, sentence=None, unicode_ok: bool = True) -> str:
    """DOT digraph of a dependency tree (head -> dependent) or a phrase tree
    (parent -> child)."""
    if isinstance(obj, DependencyGraph):
        forms, pos = _words(sentence, obj.n)
        ids = [f if forms.count(f) == 1 else f"{f}#{i}" for i, f in enumerate(forms, 1)]
        lines = ["digraph dependencies {"]
        for i, ident in enumerate(ids, 1):
            label = forms[i - 1] + (f" ({pos[i - 1]})" if pos[i - 1] else "")
            lines.append(f"  {_quote(ident)} [label={_quote(label)}];")
        for h, dep in sorted(obj.edges):
            lines.append(f"  {_quote(ids[h - 1])} -> {_quote(ids[dep - 1])};")
        lines.append("}")
        return _finish("\n".join(lines) + "\n", unicode_ok)

    if isinstance(obj, PhraseNode):
        lines = ["digraph phrase {"]
        edges = []
        counter = [0]

        def walk(node):
            ident = f"n{counter[0]}"
            counter[0] += 1
            if node.is_leaf:
                label = f"{node.label} {node.word if node.word is not None else node.leaf}"
            else:
                label = node.label + (_indices(node.tokens) if node.tangled else "")
            lines.append(f"  {_quote(ident)} [label={_quote(label)}];")
            for c in node.children:
                edges.append((ident, walk(c)))
            return ident

        walk(obj)
        lines += [f"  {_quote(a)} -> {_quote(b)};" for a, b in edges]
        lines.append("}")
        return _finish("\n".join(lines) + "\n", unicode_ok)
    raise TypeError(f"cannot draw {type(obj).__name__}")


def render_correspondence_report(records: Iterable, forms: bool = False, unicode_ok: bool = True) -> str:
    lines = [r.line(forms=forms) for r in records]
    return _finish("".join(line + "\n" for line in lines), unicode_ok)


def render(
    d: Derivation,
    options: Optional[RenderOptions] = None,
    projection: Optional[ProjectionMap] = None,
    signature: Optional[GrammarSignature] = None,
) -> str:
    """Render a derivation, or a structure converted from it, per ``options``."""
    opts = options or RenderOptions()
    if opts.format == "table":
        return render_derivation_table(d, opts.unicode_ok)
    if opts.format == "bracket":
        tree, _ = cg_to_psg(d, projection, signature)
        return render_bracketed(tree, opts.show_indices, opts.unicode_ok) + "\n"
    g, records = cg_to_dg(d)
    if opts.format == "tabular":
        return render_dependency_tabular(g, d.sentence, opts.unicode_ok)
    if opts.format == "dot":
        return render_dot(g, d.sentence, opts.unicode_ok)
    return render_correspondence_report(records, unicode_ok=opts.unicode_ok)
