"""Conversions between categorial derivations, dependency trees and phrase
structure.

Every application step pairs a functor with an argument and, at the same
time, a head with a dependent: the result's head governs the head of the
operand that lost headship.  The two pairs coincide for ordinary steps.
When an operand's category is carried by a word other than its head (a noun
phrase whose category was last set by a determiner, say) they differ, and
the step's correspondence record is marked exceptional.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .categories import Atom, Backward, Category, Forward, GrammarSignature, print_category
from .dependency import DependencyGraph, validate
from .derivation import (
    BACKWARD,
    FORWARD,
    RAISE,
    Constituent,
    Derivation,
    ReplayError,
    combine,
    leaves,
    replay,
    step_triple,
)
from .trees import PhraseNode, PSGRule

__all__ = [
    "CorrespondenceRecord",
    "ProjectionMap",
    "ProjectionError",
    "ConversionError",
    "RoundTripReport",
    "cg_to_dg",
    "canonical_attachments",
    "dg_to_cg",
    "cg_to_psg",
    "round_trip_check",
    "lexical_class",
]


class ConversionError(ValueError):
    pass


class ProjectionError(ConversionError):
    pass


def _tokens_of(sentence, n: int):
    """(forms, pos) for a Sentence-like object, falling back to indices."""
    tokens = getattr(sentence, "tokens", None)
    if tokens is None:
        return [str(i) for i in range(1, n + 1)], [str(i) for i in range(1, n + 1)]
    return [t.form for t in tokens], [t.pos for t in tokens]


@dataclass(frozen=True)
class CorrespondenceRecord:
    """One step read both ways.

    ``dg_side`` is ``H(D*)`` or ``H(*D)`` over parts of speech; ``cg_side`` is
    ``F/A`` or ``A\\F`` over the parts of speech of the words that carry the
    functor's and the argument's categories.  The ``*_forms`` fields give the
    same statements over word forms.
    """

    step_no: int
    head: int
    dependent: int
    functor_word: int
    argument_word: int
    direction: str
    dg_side: str
    cg_side: str
    dg_side_forms: str
    cg_side_forms: str
    exceptional: bool

    def line(self, forms: bool = False) -> str:
        dg, cg = (self.dg_side_forms, self.cg_side_forms) if forms else (self.dg_side, self.cg_side)
        return f"{'! ' if self.exceptional else ''}{dg} ≡ {cg}"

    def __str__(self):
        return self.line()


def _dg_form(head: str, dep: str, dep_left: bool) -> str:
    return f"{head}({dep}*)" if dep_left else f"{head}(*{dep})"


def _cg_form(functor: str, arg: str, direction: str) -> str:
    return f"{functor}/{arg}" if direction == FORWARD else f"{arg}\\{functor}"


def cg_to_dg(d: Derivation):
    """Dependency tree and per-step correspondence records of a complete derivation."""
    forms, pos = _tokens_of(d.sentence, d.n)
    edges, records = [], []
    for step in d.steps:
        if step.direction == RAISE:
            continue
        h, dep = step.result.head, step.dependent
        fw, aw, direction = step.functor.anchor, step.argument.anchor, step.direction
        if step.functor.raised:
            # read a raised operand as the argument of its would-be functor
            fw, aw = aw, fw
            direction = BACKWARD if aw < fw else FORWARD
        edges.append((h, dep))
        records.append(
            CorrespondenceRecord(
                step_no=step.step_no,
                head=h,
                dependent=dep,
                functor_word=fw,
                argument_word=aw,
                direction=direction,
                dg_side=_dg_form(pos[h - 1], pos[dep - 1], dep < h),
                cg_side=_cg_form(pos[fw - 1], pos[aw - 1], direction),
                dg_side_forms=_dg_form(forms[h - 1], forms[dep - 1], dep < h),
                cg_side_forms=_cg_form(forms[fw - 1], forms[aw - 1], direction),
                exceptional={fw, aw} != {h, dep},
            )
        )
    graph = validate(d.n, edges, d.final.head)
    return graph, records


def canonical_attachments(g: DependencyGraph) -> list:
    """(head, dependent) pairs in post-order: at each head, right dependents
    farthest first, then left dependents nearest first."""
    children = g.children_map()
    out = []

    def visit(h):
        deps = children.get(h, [])
        right = sorted((d for d in deps if d > h), reverse=True)
        left = sorted((d for d in deps if d < h), reverse=True)
        for d in right + left:
            visit(d)
            out.append((h, d))

    visit(g.root)
    return out


def _attach(left: Constituent, right_: Constituent, head: int, step_no: int):
    for f, a in ((left, right_), (right_, left)):
        step = combine(f, a, step_no)
        if step is not None and step.result.head == head:
            return step
    return None


def _schedule(g: DependencyGraph, assignment: Sequence[Category], order: Sequence) -> list:
    """Greedy replay: take the first pending attachment, in ``order``, whose
    dependent is finished and whose constituents combine with the right head."""
    of = {c.head: c for c in leaves(assignment)}  # token -> its current constituent
    pending = list(order)
    remaining = Counter(h for h, _ in pending)
    steps = []
    while pending:
        for k, (h, dep) in enumerate(pending):
            if remaining[dep]:
                continue
            step = _attach(of[h], of[dep], h, len(steps) + 1)
            if step is not None:
                break
        else:
            h, dep = next(((h, d) for h, d in pending if not remaining[d]), pending[0])
            a, b = of[h], of[dep]
            raise ConversionError(
                f"step {len(steps) + 1}: cannot attach {dep} to {h}: "
                f"{print_category(a.category)} and {print_category(b.category)} do not combine "
                f"with {h} as head"
            )
        pending.pop(k)
        remaining[h] -= 1
        for i in step.result.token_set:
            of[i] = step.result
        steps.append(step)
    return steps


_MODIFIER_CLASSES = frozenset({"N", "A", "Det"})


def _infer_assignment(g, pos, atom_map, sentence_atom, order, classify) -> tuple:
    children = g.children_map()

    def value(i) -> Category:
        if i == g.root:
            return Atom(sentence_atom)
        p = pos[i - 1]
        if atom_map is None:
            return Atom(p)
        if p not in atom_map:
            raise ConversionError(f"part of speech {p!r} missing from the atom map")
        return Atom(atom_map[p])

    modifier = {
        (h, d)
        for h, d in order
        if not children.get(d)
        and classify(pos[d - 1]) in _MODIFIER_CLASSES
        and classify(pos[h - 1]) == "N"
    }
    anchor = {i: i for i in range(1, g.n + 1)}
    plan = {i: [] for i in range(1, g.n + 1)}  # per head: (dep, kind)
    for h, d in order:
        if (h, d) in modifier:
            kind = "mod-forward" if d < anchor[h] else "mod-backward"
            anchor[h] = d
        else:
            kind = FORWARD if anchor[d] > anchor[h] else BACKWARD
        plan[h].append((d, kind))

    cats: dict = {}
    for h in range(1, g.n + 1):
        cat = value(h)
        for d, kind in reversed(plan[h]):
            if kind == "mod-forward":
                cats[d] = Forward(cat, cat)
            elif kind == "mod-backward":
                cats[d] = Backward(cat, cat)
            else:
                arg = value(d)
                if arg == cat:
                    raise ConversionError(
                        f"token {h} would need the modifier-shaped category "
                        f"{print_category(cat)}|{print_category(arg)} to take token {d} as argument"
                    )
                cat = Forward(cat, arg) if kind == FORWARD else Backward(arg, cat)
        cats.setdefault(h, cat)
    return tuple(cats[i] for i in range(1, g.n + 1))


def dg_to_cg(
    g: DependencyGraph,
    sentence,
    mode: str = "script",
    *,
    lexicon=None,
    assignment: Optional[Sequence[Category]] = None,
    atom_map: Optional[Mapping[str, str]] = None,
    signature: Optional[GrammarSignature] = None,
    order: Optional[Sequence] = None,
    projection: Optional["ProjectionMap"] = None,
) -> Derivation:
    """Rebuild a categorial derivation from a dependency tree.

    ``script`` mode takes categories from ``assignment`` or, failing that,
    from ``lexicon`` (trying each combination of ambiguous entries).
    ``infer`` mode makes them up: the root ends in the sentence atom, other
    words in ``atom_map[pos]`` (default: the tag itself), leaf nominal or
    adjectival dependents of nouns become modifiers, and every other head is
    given a category that cancels its dependents in traversal order.
    """
    n = g.n
    _, pos = _tokens_of(sentence, n)
    order = list(order) if order is not None else canonical_attachments(g)
    if sorted(order) != sorted(g.edges):
        raise ConversionError("attachment order does not cover the tree's edges exactly")

    if mode == "infer":
        sig = signature or (lexicon.signature if lexicon else GrammarSignature())
        classify = (projection or ProjectionMap()).lexical_class
        cats = _infer_assignment(g, pos, atom_map, sig.sentence_atom, order, classify)
        steps = _schedule(g, cats, order)
        return _as_derivation(sentence, cats, steps)
    if mode != "script":
        raise ValueError(f"unknown mode {mode!r}; use 'script' or 'infer'")

    if assignment is not None:
        candidates = [tuple(assignment)]
    elif lexicon is not None:
        from .derivation import assignments

        candidates = list(assignments(sentence, lexicon))
    else:
        raise ConversionError("script mode needs an assignment or a lexicon")

    first_error = None
    for cats in candidates:
        try:
            steps = _schedule(g, cats, order)
        except ConversionError as e:
            first_error = first_error or e
            continue
        return _as_derivation(sentence, cats, steps)
    raise first_error or ConversionError("no category assignment available")


def _as_derivation(sentence, cats, steps) -> Derivation:
    cats = tuple(cats)
    final = steps[-1].result if steps else leaves(cats)[0]
    return Derivation(sentence, cats, tuple(steps), final)


_TRAILING_DIGITS = re.compile(r"\d+$")

DEFAULT_CLASS_ALIASES = {"Infinitive": "I", "Inf": "I", "Adj": "A"}


@dataclass(frozen=True)
class ProjectionMap:
    """How parts of speech name phrase-structure nodes.

    A tag is reduced to a lexical class (``N1`` -> ``N``, ``Adj`` -> ``A``,
    ``Infinitive`` -> ``I``).  A phrase headed by class ``X`` is labeled
    ``phrases[X]``; with ``phrases`` left as None it is ``X + "P"``.  Only
    classes in ``projecting`` get a unary phrase above a non-head leaf.
    """

    phrases: Optional[Mapping[str, str]] = None
    aliases: Mapping[str, str] = field(default_factory=lambda: dict(DEFAULT_CLASS_ALIASES))
    projecting: frozenset = frozenset({"N", "A"})
    sentence_label: str = "S"

    def lexical_class(self, pos: str) -> str:
        if pos in self.aliases:
            return self.aliases[pos]
        return _TRAILING_DIGITS.sub("", pos) or pos

    def phrase(self, cls: str) -> str:
        if self.phrases is None:
            return cls + "P"
        if cls not in self.phrases:
            raise ProjectionError(f"lexical class {cls!r} missing from the projection map")
        return self.phrases[cls]


def lexical_class(pos: str) -> str:
    return ProjectionMap().lexical_class(pos)


def cg_to_psg(
    d: Derivation,
    projection: Optional[ProjectionMap] = None,
    signature: Optional[GrammarSignature] = None,
):
    """Phrase-structure tree and rule multiset of a complete derivation.

    Each application result becomes a node named after its head's class
    (``S`` when it has the sentence category, and always at the top).  A
    child with the same head and label as its parent is merged into it.
    Non-head leaves of projecting classes get a unary phrase.  Children are
    ordered by the position of the word carrying each child's category.
    """
    proj = projection or ProjectionMap()
    sentence_cat = (signature or GrammarSignature()).sentence
    forms, pos = _tokens_of(d.sentence, d.n)
    # constituent -> (label, head, anchor, [(anchor, child node)]) or a leaf node
    built: dict = {}
    for c in leaves(d.assignment):
        i = c.head
        built[c] = PhraseNode(proj.lexical_class(pos[i - 1]), leaf=i, word=forms[i - 1])

    def as_children(c: Constituent, parent_head: int, parent_label: str) -> list:
        entry = built[c]
        if isinstance(entry, PhraseNode):
            if entry.leaf != parent_head and entry.label in proj.projecting:
                return [(entry.leaf, PhraseNode(proj.phrase(entry.label), (entry,)))]
            return [(entry.leaf, entry)]
        label, head, anchor, kids = entry
        if head == parent_head and label == parent_label:
            return kids
        return [(anchor, _node(entry))]

    top = None
    for step in d.steps:
        if step.direction == RAISE:
            built[step.result] = built[step.functor]
            continue
        r = step.result
        if r.category == sentence_cat:
            label = proj.sentence_label
        else:
            label = proj.phrase(proj.lexical_class(pos[r.head - 1]))
        kids = as_children(step.functor, r.head, label) + as_children(step.argument, r.head, label)
        kids.sort(key=lambda pair: pair[0])
        built[r] = (label, r.head, r.anchor, kids)
        top = r

    if top is None:
        root = built[d.final]
    else:
        _, head, anchor, kids = built[top]
        root = _node((proj.sentence_label, head, anchor, kids))
    return root, root.rules()


def _node(entry) -> PhraseNode:
    label, _, _, kids = entry
    return PhraseNode(label, tuple(k for _, k in kids))


@dataclass(frozen=True)
class RoundTripReport:
    ok: bool
    original_steps: tuple
    rebuilt_steps: tuple
    missing: tuple
    extra: tuple
    unmatched_nodes: tuple
    error: Optional[str] = None

    def __str__(self):
        if self.ok:
            return "round trip preserved the step multiset and every phrase yield"
        parts = []
        if self.error:
            parts.append(self.error)
        if self.missing:
            parts.append(f"steps lost: {list(self.missing)}")
        if self.extra:
            parts.append(f"steps gained: {list(self.extra)}")
        if self.unmatched_nodes:
            parts.append(f"phrase yields with no matching step: {list(self.unmatched_nodes)}")
        return "; ".join(parts)


def round_trip_check(
    d: Derivation,
    projection: Optional[ProjectionMap] = None,
    signature: Optional[GrammarSignature] = None,
) -> RoundTripReport:
    """Check that DG -> CG recovers the step multiset of ``d`` and that every
    multi-word phrase of its tree spans exactly some step result."""
    original = Counter(step_triple(s) for s in d.steps)
    error, rebuilt = None, Counter()
    try:
        g, _ = cg_to_dg(d)
        back = dg_to_cg(g, d.sentence, "script", assignment=d.assignment)
        rebuilt = Counter(step_triple(s) for s in back.steps)
    except (ConversionError, ReplayError) as e:
        error = str(e)
    missing = tuple(sorted((original - rebuilt).elements()))
    extra = tuple(sorted((rebuilt - original).elements()))

    results = {s.result.token_set for s in d.steps}
    unmatched = ()
    try:
        tree, _ = cg_to_psg(d, projection, signature)
        unmatched = tuple(
            sorted(
                tuple(sorted(n.tokens))
                for n in tree.internal_nodes()
                if len(n.tokens) > 1 and n.tokens not in results
            )
        )
    except ProjectionError as e:
        error = error or str(e)
    ok = error is None and not missing and not extra and not unmatched
    return RoundTripReport(
        ok, tuple(sorted(original.elements())), tuple(sorted(rebuilt.elements())), missing, extra, unmatched, error
    )
