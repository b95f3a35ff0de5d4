"""Sentences, lexicons and gold corpus entries, with their text formats.

Lexicon file::

    atoms: N S
    sentence: S
    # FORM<TAB>POS<TAB>CATEGORY[,CATEGORY...]
    panti-rni\tV\t(S/N)/N

Corpus entry file::

    #SENT id=ex11-croatian lang=hrv
    #TRANSLATION Our classroom is comfortable.
    1\tNaša\tDet\tN/N\t3\tour
    ...
    #STEP functor={2} arg={4}
    #RULE S -> NP AuxP
    #NOTE free text

Token lines are ``INDEX FORM POS CATEGORY GOLD_HEAD [GLOSS]``.  Forms are
compared after NFC normalization.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .categories import (
    Category,
    CategoryError,
    GrammarSignature,
    parse_category,
    print_category,
)
from .dependency import DependencyError, DependencyGraph, validate
from .trees import PSGRule, parse_psg_rule

__all__ = [
    "Token",
    "Sentence",
    "Lexicon",
    "CorpusEntry",
    "CorpusFormatError",
    "load_lexicon",
    "dump_lexicon",
    "load_corpus_entry",
    "dump_corpus_entry",
    "load_sentence",
    "builtin_corpus",
    "builtin_entry",
    "builtin_lexicon",
    "BUILTIN_IDS",
    "nfc",
]

BUILTIN_IDS = (
    "ex1-warlpiri",
    "ex6-malayalam",
    "ex7-kwakwala",
    "ex9-english",
    "ex10-german",
    "ex11-croatian",
    "ex12-kalkatungu",
    "ex-np-english",
)


class CorpusFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


@dataclass(frozen=True)
class Token:
    index: int
    form: str
    pos: str
    gloss: Optional[str] = None

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"token index must be >= 1, got {self.index}")
        if not self.form:
            raise ValueError("token form is empty")
        object.__setattr__(self, "form", nfc(self.form))


@dataclass(frozen=True)
class Sentence:
    id: str
    language: str
    tokens: tuple
    translation: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        for k, tok in enumerate(self.tokens, 1):
            if tok.index != k:
                raise ValueError(f"token {tok.form!r} has index {tok.index}, expected {k}")

    def __len__(self):
        return len(self.tokens)

    def __getitem__(self, index: int) -> Token:
        """1-based access."""
        return self.tokens[index - 1]

    @property
    def forms(self) -> list:
        return [t.form for t in self.tokens]

    @property
    def pos(self) -> list:
        return [t.pos for t in self.tokens]

    @classmethod
    def from_pairs(cls, pairs, id="sentence", language="und", translation=None):
        tokens = [Token(i, form, pos) for i, (form, pos) in enumerate(pairs, 1)]
        return cls(id, language, tokens, translation)


@dataclass
class Lexicon:
    """Maps ``(form, pos)`` to the categories the item may bear."""

    signature: GrammarSignature = field(default_factory=GrammarSignature)
    entries: dict = field(default_factory=dict)

    def categories(self, form: str, pos: str) -> tuple:
        try:
            return self.entries[(nfc(form), pos)]
        except KeyError:
            raise KeyError(f"no lexicon entry for {form!r} ({pos})") from None

    def add(self, form: str, pos: str, category: Category) -> None:
        if not self.signature.admits(category):
            raise CategoryError(f"{print_category(category)} uses atoms outside the signature")
        key = (nfc(form), pos)
        known = self.entries.get(key, ())
        if category not in known:
            self.entries[key] = known + (category,)

    def __len__(self):
        return len(self.entries)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip() if "#" in line else line.rstrip()


def load_lexicon(text: str) -> Lexicon:
    atoms, sentence = None, None
    rows = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        head = line.strip()
        if head.startswith("atoms:"):
            atoms = head[len("atoms:"):].split()
            continue
        if head.startswith("sentence:"):
            sentence = head[len("sentence:"):].strip()
            continue
        cols = line.split("\t")
        if len(cols) != 3 or not all(c.strip() for c in cols):
            raise CorpusFormatError("expected FORM<TAB>POS<TAB>CATEGORY[,CATEGORY...]", no)
        rows.append((no, cols))

    try:
        sig = GrammarSignature(
            frozenset(atoms) if atoms is not None else frozenset({"N", "S"}),
            sentence or "S",
        )
    except CategoryError as e:
        raise CorpusFormatError(str(e)) from e

    lex = Lexicon(sig)
    for no, (form, pos, cats) in rows:
        for text_cat in cats.split(","):
            try:
                lex.add(form.strip(), pos.strip(), parse_category(text_cat.strip(), sig))
            except CategoryError as e:
                raise CorpusFormatError(str(e), no) from e
    return lex


def dump_lexicon(lex: Lexicon) -> str:
    lines = [
        f"atoms: {' '.join(sorted(lex.signature.atoms))}",
        f"sentence: {lex.signature.sentence_atom}",
    ]
    for (form, pos), cats in lex.entries.items():
        lines.append(f"{form}\t{pos}\t{','.join(print_category(c) for c in cats)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CorpusEntry:
    sentence: Sentence
    lexicon_assignment: tuple
    gold_step_script: tuple
    gold_dependency_edges: frozenset
    gold_root: int
    gold_psg_rules: tuple = ()
    notes: tuple = ()
    target: Optional[Category] = None
    lexicon: Optional[Lexicon] = field(default=None, compare=False, repr=False)

    @property
    def id(self) -> str:
        return self.sentence.id

    @property
    def gold_graph(self) -> DependencyGraph:
        return validate(len(self.sentence), self.gold_dependency_edges, self.gold_root)

    def goal(self, sig: Optional[GrammarSignature] = None) -> Category:
        """The category a complete replay must reach."""
        if self.target is not None:
            return self.target
        sig = sig or (self.lexicon.signature if self.lexicon else GrammarSignature())
        return sig.sentence


_SET_RE = re.compile(r"\{([0-9,\s]*)\}")
_STEP_RE = re.compile(r"^#STEP\s+functor=(\{[0-9,\s]*\})\s+arg=(\{[0-9,\s]*\})\s*$")


def _parse_index_set(text: str, no: int) -> frozenset:
    m = _SET_RE.fullmatch(text.strip())
    if not m:
        raise CorpusFormatError(f"malformed index set {text!r}", no)
    items = [x for x in re.split(r"[,\s]+", m.group(1)) if x]
    if not items:
        raise CorpusFormatError("empty index set", no)
    return frozenset(int(x) for x in items)


def _format_index_set(s) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


def _parse_header(line: str, no: int) -> dict:
    attrs = {}
    for part in line[len("#SENT"):].split():
        if "=" not in part:
            raise CorpusFormatError(f"malformed header attribute {part!r}", no)
        k, v = part.split("=", 1)
        attrs[k] = v
    if "id" not in attrs:
        raise CorpusFormatError("#SENT header needs id=", no)
    return attrs


def _scan_entry(text: str):
    header, translation = None, None
    token_rows, steps, rules, notes = [], [], [], []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if line.startswith("#SENT"):
            header = _parse_header(line, no)
        elif line.startswith("#TRANSLATION"):
            translation = line[len("#TRANSLATION"):].strip() or None
        elif line.startswith("#STEP"):
            m = _STEP_RE.match(line.strip())
            if not m:
                raise CorpusFormatError("expected #STEP functor={i,...} arg={j,...}", no)
            steps.append((_parse_index_set(m.group(1), no), _parse_index_set(m.group(2), no)))
        elif line.startswith("#RULE"):
            try:
                rules.append(parse_psg_rule(line[len("#RULE"):]))
            except ValueError as e:
                raise CorpusFormatError(str(e), no) from e
        elif line.startswith("#NOTE"):
            notes.append(line[len("#NOTE"):].strip())
        elif line.startswith("#"):
            continue
        else:
            cols = line.split("\t")
            if len(cols) not in (5, 6):
                raise CorpusFormatError(
                    "expected INDEX<TAB>FORM<TAB>POS<TAB>CATEGORY<TAB>HEAD[<TAB>GLOSS]", no
                )
            token_rows.append((no, cols))
    if header is None:
        raise CorpusFormatError("missing #SENT header")
    if not token_rows:
        raise CorpusFormatError("entry has no tokens")
    return header, translation, token_rows, steps, rules, notes


def _tokens(token_rows) -> list:
    tokens = []
    for k, (no, cols) in enumerate(token_rows, 1):
        if not cols[0].strip().isdigit() or int(cols[0]) != k:
            raise CorpusFormatError(f"expected token index {k}, found {cols[0]!r}", no)
        gloss = cols[5].strip() if len(cols) == 6 and cols[5].strip() else None
        try:
            tokens.append(Token(k, cols[1].strip(), cols[2].strip(), gloss))
        except ValueError as e:
            raise CorpusFormatError(str(e), no) from e
    return tokens


def load_sentence(text: str, lexicon: Optional[Lexicon] = None):
    """Load just the sentence of an entry-format file.

    CATEGORY and HEAD columns may be ``_``.  Returns ``(sentence, assignment)``
    where ``assignment`` is None unless every category column is filled.
    """
    header, translation, token_rows, _, _, _ = _scan_entry(text)
    sentence = Sentence(header["id"], header.get("lang", "und"), _tokens(token_rows), translation)
    sig = lexicon.signature if lexicon else None
    cats = []
    for no, cols in token_rows:
        if cols[3].strip() == "_":
            return sentence, None
        try:
            cats.append(parse_category(cols[3].strip(), sig))
        except CategoryError as e:
            raise CorpusFormatError(str(e), no) from e
    return sentence, tuple(cats)


def load_corpus_entry(text: str, lexicon: Lexicon) -> CorpusEntry:
    header, translation, token_rows, steps, rules, notes = _scan_entry(text)
    tokens = _tokens(token_rows)
    n = len(tokens)
    sentence = Sentence(header["id"], header.get("lang", "und"), tokens, translation)
    sig = lexicon.signature

    assignment, heads = [], []
    for tok, (no, cols) in zip(tokens, token_rows):
        try:
            cat = parse_category(cols[3].strip(), sig)
        except CategoryError as e:
            raise CorpusFormatError(str(e), no) from e
        try:
            allowed = lexicon.categories(tok.form, tok.pos)
        except KeyError as e:
            raise CorpusFormatError(str(e.args[0]), no) from None
        if cat not in allowed:
            raise CorpusFormatError(
                f"{tok.form!r} is not listed with category {print_category(cat)}", no
            )
        assignment.append(cat)
        head = cols[4].strip()
        if not head.isdigit() or int(head) > n:
            raise CorpusFormatError(f"gold head {head!r} is not an index in 0..{n}", no)
        heads.append(int(head))

    roots = [i for i, h in enumerate(heads, 1) if h == 0]
    if len(roots) != 1:
        raise CorpusFormatError(f"expected exactly one root (head 0), found {len(roots)}")
    edges = frozenset((h, i) for i, h in enumerate(heads, 1) if h)
    try:
        validate(n, edges, roots[0])
    except DependencyError as e:
        raise CorpusFormatError(f"gold edges are not a tree: {e}") from e

    for functor, arg in steps:
        for i in functor | arg:
            if not 1 <= i <= n:
                raise CorpusFormatError(f"step script refers to unknown token {i}")
        if functor & arg:
            raise CorpusFormatError("step script combines overlapping token sets")

    target = None
    if "target" in header:
        try:
            target = parse_category(header["target"], sig)
        except CategoryError as e:
            raise CorpusFormatError(str(e)) from e
    if steps and target is None and len(steps) != n - 1:
        raise CorpusFormatError(f"a full derivation of {n} tokens needs {n - 1} steps, got {len(steps)}")

    return CorpusEntry(
        sentence=sentence,
        lexicon_assignment=tuple(assignment),
        gold_step_script=tuple(steps),
        gold_dependency_edges=edges,
        gold_root=roots[0],
        gold_psg_rules=tuple(rules),
        notes=tuple(notes),
        target=target,
        lexicon=lexicon,
    )


def dump_corpus_entry(entry: CorpusEntry) -> str:
    s = entry.sentence
    header = f"#SENT id={s.id} lang={s.language}"
    if entry.target is not None:
        header += f" target={print_category(entry.target)}"
    lines = [header]
    if s.translation:
        lines.append(f"#TRANSLATION {s.translation}")
    heads = {d: h for h, d in entry.gold_dependency_edges}
    for tok, cat in zip(s.tokens, entry.lexicon_assignment):
        cols = [str(tok.index), tok.form, tok.pos, print_category(cat), str(heads.get(tok.index, 0))]
        if tok.gloss:
            cols.append(tok.gloss)
        lines.append("\t".join(cols))
    for functor, arg in entry.gold_step_script:
        lines.append(f"#STEP functor={_format_index_set(functor)} arg={_format_index_set(arg)}")
    for rule in entry.gold_psg_rules:
        lines.append(f"#RULE {rule}")
    for note in entry.notes:
        lines.append(f"#NOTE {note}")
    return "\n".join(lines) + "\n"


def _data(name: str) -> str:
    return resources.files("triform").joinpath("data", name).read_text(encoding="utf-8")


def builtin_lexicon(entry_id: str) -> Lexicon:
    return load_lexicon(_data(f"{entry_id}.lex"))


def builtin_entry(entry_id: str) -> CorpusEntry:
    if entry_id not in BUILTIN_IDS:
        raise KeyError(f"no builtin entry {entry_id!r}; known: {', '.join(BUILTIN_IDS)}")
    return load_corpus_entry(_data(f"{entry_id}.entry"), builtin_lexicon(entry_id))


def builtin_corpus() -> list:
    return [builtin_entry(i) for i in BUILTIN_IDS]
