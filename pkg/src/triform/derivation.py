"""Categorial derivations over possibly discontinuous constituents.

A constituent keeps three positions apart:

* ``head``: the word that heads it in the dependency sense,
* ``anchor``: the word whose category the constituent currently carries
  (the functor's anchor after application, the argument's after a raised
  functor applies),
* ``token_set``: everything it covers, which need not be an interval.

Directional application compares anchors: a forward functor needs its
argument's anchor to its right, a backward functor to its left.  Combining
non-adjacent token sets is *wrapping*; it is allowed unless switched off.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from .categories import (
    Atom,
    Backward,
    Category,
    Forward,
    GrammarSignature,
    backward_apply,
    forward_apply,
    is_modifier,
    print_category,
    type_raise,
)
from .trees import is_interval

__all__ = [
    "Constituent",
    "DerivationStep",
    "Derivation",
    "ReplayError",
    "IterateWrapError",
    "FORWARD",
    "BACKWARD",
    "RAISE",
    "leaves",
    "combine",
    "raise_constituent",
    "derive",
    "derive_with_lexicon",
    "assignments",
    "replay",
    "iterate_wrap",
    "step_triple",
]

FORWARD = "forward"
BACKWARD = "backward"
RAISE = "raise"


@dataclass(frozen=True)
class Constituent:
    token_set: frozenset
    category: Category
    head: int
    anchor: int
    label: Optional[str] = None
    raised: bool = False

    def __post_init__(self):
        object.__setattr__(self, "token_set", frozenset(self.token_set))
        if not self.token_set:
            raise ValueError("a constituent covers at least one token")
        if self.head not in self.token_set or self.anchor not in self.token_set:
            raise ValueError(f"head {self.head} / anchor {self.anchor} outside {sorted(self.token_set)}")

    @property
    def continuous(self) -> bool:
        return is_interval(self.token_set)

    def span(self) -> tuple:
        return tuple(sorted(self.token_set))

    def __str__(self):
        return f"{{{','.join(map(str, self.span()))}}}:{print_category(self.category)}"


@dataclass(frozen=True)
class DerivationStep:
    """One application (or, with ``direction == "raise"``, one type-raise;
    then ``argument`` is None)."""

    step_no: int
    functor: Constituent
    argument: Optional[Constituent]
    direction: str
    result: Constituent
    wrapped: bool

    @property
    def dependent(self) -> Optional[int]:
        """Head of whichever operand lost headship."""
        if self.argument is None:
            return None
        if self.result.head == self.functor.head:
            return self.argument.head
        return self.functor.head


def step_triple(step: DerivationStep) -> tuple:
    arg = step.argument.span() if step.argument is not None else ()
    return (step.functor.span(), arg, step.direction)


@dataclass(frozen=True)
class Derivation:
    sentence: object
    assignment: tuple
    steps: tuple
    final: Constituent

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def key(self) -> tuple:
        """Step multiset as a sorted tuple of (functor span, argument span, direction)."""
        return tuple(sorted(step_triple(s) for s in self.steps))

    def applications(self) -> list:
        return [s for s in self.steps if s.direction != RAISE]

    def stages(self) -> list:
        """Constituents present before each step, then the final stage."""
        state = leaves(self.assignment)
        out = [list(state)]
        for s in self.steps:
            state = [c for c in state if c != s.functor and c != s.argument] + [s.result]
            out.append(sorted(state, key=lambda c: min(c.token_set)))
        return out


class ReplayError(ValueError):
    def __init__(self, message: str, step_no: Optional[int] = None):
        super().__init__(f"step {step_no}: {message}" if step_no is not None else message)
        self.step_no = step_no


class IterateWrapError(ValueError):
    def __init__(self, message: str, stage: int):
        super().__init__(f"stage {stage}: {message}")
        self.stage = stage


def leaves(assignment: Sequence[Category]) -> list:
    return [Constituent(frozenset({i}), c, i, i) for i, c in enumerate(assignment, 1)]


def _adjacent(a: frozenset, b: frozenset) -> bool:
    return is_interval(a) and is_interval(b) and (max(a) + 1 == min(b) or max(b) + 1 == min(a))


def combine(functor: Constituent, argument: Constituent, step_no: int = 1) -> Optional[DerivationStep]:
    """Apply ``functor`` to ``argument`` if the categories and anchors allow it."""
    if functor.token_set & argument.token_set:
        raise ValueError(
            f"constituents {sorted(functor.token_set)} and {sorted(argument.token_set)} overlap"
        )
    cat = functor.category
    if isinstance(cat, Forward) and argument.anchor > functor.anchor:
        result_cat, direction = forward_apply(cat, argument.category), FORWARD
    elif isinstance(cat, Backward) and argument.anchor < functor.anchor:
        result_cat, direction = backward_apply(argument.category, cat), BACKWARD
    else:
        return None
    if result_cat is None:
        return None
    if functor.raised:
        head, anchor = argument.head, argument.anchor
    elif is_modifier(cat):
        head, anchor = argument.head, functor.anchor
    else:
        head, anchor = functor.head, functor.anchor
    result = Constituent(functor.token_set | argument.token_set, result_cat, head, anchor)
    wrapped = not _adjacent(functor.token_set, argument.token_set)
    return DerivationStep(step_no, functor, argument, direction, result, wrapped)


def raise_constituent(c: Constituent, target: Category, step_no: int = 1) -> Optional[DerivationStep]:
    """Forward type-raise an atomic constituent to ``target/(Y\\target)``."""
    if c.raised or not isinstance(c.category, Atom):
        return None
    raised = replace(c, category=type_raise(c.category, target), raised=True, label=None)
    return DerivationStep(step_no, c, None, RAISE, raised, False)


def _number(steps: Iterable[DerivationStep]) -> tuple:
    return tuple(replace(s, step_no=k) for k, s in enumerate(steps, 1))


def _canonical_order(step_set: Iterable[DerivationStep], start: Iterable[Constituent]) -> list:
    """Topological order of a step set, always taking the smallest available triple."""
    pending = sorted(step_set, key=step_triple)
    present = set(start)
    ordered = []
    while pending:
        for k, s in enumerate(pending):
            if s.functor in present and (s.argument is None or s.argument in present):
                break
        else:
            raise RuntimeError("step set is not a derivation")
        pending.pop(k)
        present.discard(s.functor)
        present.discard(s.argument)
        present.add(s.result)
        ordered.append(s)
    return ordered


def derive(
    sentence,
    assignment: Sequence[Category],
    *,
    allow_wrapping: bool = True,
    allow_type_raising: bool = False,
    max_results: Optional[int] = 64,
    target: Optional[Category] = None,
    signature: Optional[GrammarSignature] = None,
) -> list:
    """All complete derivations reaching ``target`` (default: the sentence atom).

    Derivations that differ only in the interleaving of independent steps are
    the same derivation; each is returned once with its steps in canonical
    order.  The list is sorted by step triples and cut at ``max_results``.
    """
    assignment = tuple(assignment)
    if not assignment:
        return []
    sig = signature or GrammarSignature()
    goal = target if target is not None else sig.sentence
    start = frozenset(leaves(assignment))
    memo: dict = {}

    def moves(state):
        items = sorted(state, key=lambda c: (min(c.token_set), str(c)))
        for a, b in combinations(items, 2):
            if a.token_set & b.token_set:
                continue
            for f, x in ((a, b), (b, a)):
                step = combine(f, x, 0)
                if step is None or (step.wrapped and not allow_wrapping):
                    continue
                yield step, (state - {f, x}) | {step.result}
        if allow_type_raising and len(state) > 1:
            for c in items:
                step = raise_constituent(c, sig.sentence, 0)
                if step is not None:
                    yield step, (state - {c}) | {step.result}

    def solve(state) -> frozenset:
        if state in memo:
            return memo[state]
        if len(state) == 1:
            (only,) = state
            found = frozenset({frozenset()}) if only.category == goal else frozenset()
        else:
            acc = set()
            for step, nxt in moves(state):
                for rest in solve(nxt):
                    acc.add(rest | {step})
            found = frozenset(acc)
        memo[state] = found
        return found

    results = []
    for step_set in solve(start):
        ordered = _number(_canonical_order(step_set, start))
        final = ordered[-1].result if ordered else next(iter(start))
        results.append(Derivation(sentence, assignment, ordered, final))
    results.sort(key=lambda d: (d.key, [print_category(s.result.category) for s in d.steps]))
    if max_results is not None:
        results = results[:max_results]
    return results


def assignments(sentence, lexicon) -> Iterable[tuple]:
    """Every category assignment the lexicon allows for the sentence."""
    options = [lexicon.categories(t.form, t.pos) for t in sentence.tokens]
    return product(*options)


def derive_with_lexicon(sentence, lexicon, **options) -> list:
    """Derive under every lexical assignment; results merged and sorted."""
    max_results = options.pop("max_results", 64)
    found = []
    for assignment in assignments(sentence, lexicon):
        found.extend(
            derive(sentence, assignment, max_results=None, signature=lexicon.signature, **options)
        )
    found.sort(key=lambda d: (d.key, [print_category(c) for c in d.assignment]))
    return found if max_results is None else found[:max_results]


def replay(sentence, assignment: Sequence[Category], script: Sequence) -> Derivation:
    """Follow a script of ``(functor tokens, argument tokens)`` pairs exactly."""
    assignment = tuple(assignment)
    state = {c.token_set: c for c in leaves(assignment)}
    steps = []
    for k, (functor_set, arg_set) in enumerate(script, 1):
        functor_set, arg_set = frozenset(functor_set), frozenset(arg_set)
        for part in (functor_set, arg_set):
            if part not in state:
                raise ReplayError(f"{sorted(part)} is not a current constituent", k)
        f, a = state[functor_set], state[arg_set]
        if functor_set & arg_set:
            raise ReplayError("functor and argument overlap", k)
        step = combine(f, a, k)
        if step is None:
            tried = FORWARD if a.anchor > f.anchor else BACKWARD
            raise ReplayError(
                f"{print_category(f.category)} cannot take {print_category(a.category)} "
                f"({tried}, functor word {f.anchor}, argument word {a.anchor})",
                k,
            )
        del state[functor_set], state[arg_set]
        state[step.result.token_set] = step.result
        steps.append(step)
    if len(state) != 1:
        raise ReplayError(f"script leaves {len(state)} constituents uncombined")
    (final,) = state.values()
    return Derivation(sentence, assignment, tuple(steps), final)


def iterate_wrap(
    functor: Constituent, intermediates: Sequence[Constituent], final_arg: Constituent
) -> list:
    """Fold ``((functor + i1) + i2 ...) + final_arg`` and return the steps."""
    current = functor
    steps = []
    for stage, arg in enumerate(list(intermediates) + [final_arg], 1):
        if current.token_set & arg.token_set:
            raise IterateWrapError(f"{arg} overlaps {current}", stage)
        step = combine(current, arg, stage)
        if step is None:
            raise IterateWrapError(
                f"{print_category(current.category)} cannot take {print_category(arg.category)}",
                stage,
            )
        steps.append(step)
        current = step.result
    return steps
