"""Command-line interface.

Exit codes: 0 success, 1 no parse or a failed check, 2 usage or input error.
Results go to stdout (or ``--out``), diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import re
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

from .categories import CategoryError, parse_category, print_category
from .corpus import (
    BUILTIN_IDS,
    CorpusFormatError,
    Sentence,
    builtin_entry,
    builtin_lexicon,
    dump_corpus_entry,
    dump_lexicon,
    load_corpus_entry,
    load_lexicon,
    load_sentence,
)
from .correspondence import ConversionError, cg_to_dg, cg_to_psg, dg_to_cg, round_trip_check
from .dependency import DependencyError, graph_from_heads, projectivity, read_tabular
from .derivation import ReplayError, derive_with_lexicon, replay
from .render import (
    FORMATS,
    RenderOptions,
    render,
    render_bracketed,
    render_dependency_tabular,
    render_dot,
    to_ascii,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


INPUT_ERRORS = (OSError, CorpusFormatError, CategoryError, DependencyError, KeyError, UnicodeDecodeError)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from e


def _lexicon_for(path: Optional[str], lexicon_path: Optional[str]):
    if lexicon_path:
        return load_lexicon(_read(lexicon_path))
    if path:
        sibling = Path(path).with_suffix(".lex")
        if sibling.exists():
            return load_lexicon(_read(str(sibling)))
    raise InputError("no lexicon: pass --lexicon or put a .lex file next to the input")


def _load_entry(path: str, lexicon_path: Optional[str]):
    return load_corpus_entry(_read(path), _lexicon_for(path, lexicon_path))


def _entry_from_args(args):
    if args.builtin:
        return builtin_entry(args.builtin)
    if not args.input:
        raise InputError("give an input file or --builtin ID")
    return _load_entry(args.input, args.lexicon)


def _gold_derivation(entry):
    return replay(entry.sentence, entry.lexicon_assignment, entry.gold_step_script)


def _options(args, default: str) -> RenderOptions:
    return RenderOptions(args.format or default, args.show_indices, not args.ascii)


@contextmanager
def _output(args):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            yield fh
    else:
        yield sys.stdout


def _emit(args, text: str) -> None:
    with _output(args) as fh:
        fh.write(text)


def _err(message: str) -> None:
    print(message, file=sys.stderr)


_TARGET_RE = re.compile(r"^#SENT\b.*\btarget=(\S+)", re.M)


def cmd_derive(args) -> int:
    if args.builtin:
        entry = builtin_entry(args.builtin)
        sentence, lexicon, target = entry.sentence, entry.lexicon, entry.target
    else:
        if not args.input:
            raise InputError("give a sentence file or --builtin ID")
        text = _read(args.input)
        lexicon = _lexicon_for(args.input, args.lexicon)
        sentence, _ = load_sentence(text)
        m = _TARGET_RE.search(text)
        target = parse_category(m.group(1), lexicon.signature) if m else None
    found = derive_with_lexicon(
        sentence,
        lexicon,
        allow_wrapping=args.wrap,
        allow_type_raising=args.type_raise,
        max_results=args.max_results,
        target=target,
    )
    if not found:
        _err(f"no derivation for {sentence.id}" + ("" if args.wrap else " without wrapping"))
        return EXIT_FAIL
    opts = _options(args, "table")
    chunks = []
    for k, d in enumerate(found, 1):
        head = f"# derivation {k} of {len(found)}\n"
        chunks.append(head + render(d, opts, signature=lexicon.signature))
    _emit(args, "\n".join(chunks))
    return EXIT_OK


def _script_lines(d) -> str:
    def fmt(s):
        return "{" + ",".join(str(i) for i in sorted(s)) + "}"

    return "".join(
        f"#STEP functor={fmt(s.functor.token_set)} arg={fmt(s.argument.token_set)}\n"
        for s in d.steps
        if s.argument is not None
    )


def _optional_lexicon(args):
    try:
        return _lexicon_for(args.input, args.lexicon)
    except InputError:
        if args.infer:
            return None
        raise


def _graph_input(args):
    """(sentence, graph, lexicon or None) from --builtin, an entry file or a tabular file."""
    if args.builtin:
        e = builtin_entry(args.builtin)
        return e.sentence, e.gold_graph, e.lexicon
    if not args.input:
        raise InputError("give an input file or --builtin ID")
    text = _read(args.input)
    lexicon = _optional_lexicon(args)
    if text.lstrip().startswith("#SENT"):
        if lexicon is not None:
            entry = load_corpus_entry(text, lexicon)
            return entry.sentence, entry.gold_graph, lexicon
        sentence, _ = load_sentence(text)
        heads = [
            int(cols[4])
            for cols in (line.split("\t") for line in text.splitlines() if not line.startswith("#"))
            if len(cols) >= 5
        ]
        return sentence, graph_from_heads(heads), None
    blocks = read_tabular(text)
    if len(blocks) != 1:
        raise InputError(f"expected one sentence in {args.input}, found {len(blocks)}")
    rows, g = blocks[0]
    return Sentence.from_pairs(rows, id=Path(args.input).stem), g, lexicon


def cmd_convert(args) -> int:
    if args.direction == "dg2cg":
        sentence, g, lexicon = _graph_input(args)
        mode = "infer" if args.infer else "script"
        sig = lexicon.signature if lexicon else None
        d = dg_to_cg(g, sentence, mode, lexicon=lexicon, signature=sig)
        _emit(args, _script_lines(d) + "\n" + render(d, _options(args, "table"), signature=sig))
        return EXIT_OK

    entry = _entry_from_args(args)
    d = _gold_derivation(entry)
    sig = entry.lexicon.signature
    if args.direction == "cg2dg":
        _emit(args, render(d, _options(args, "tabular"), signature=sig))
        return EXIT_OK
    tree, rules = cg_to_psg(d, signature=sig)
    if args.format == "bracket":
        text = render_bracketed(tree, args.show_indices, not args.ascii) + "\n"
    elif args.format == "dot":
        text = render_dot(tree, unicode_ok=not args.ascii)
    else:
        seen = []
        for node in tree.internal_nodes():
            rule = f"{node.label} -> {' '.join(c.label for c in node.children)}"
            if rule not in seen:
                seen.append(rule)
        text = "".join(r + "\n" for r in seen)
        if args.ascii:
            text = to_ascii(text)
    _emit(args, text)
    return EXIT_OK


def _check_entry(entry) -> list:
    """(passed, check name, detail) triples for one entry."""
    out = []
    sig = entry.lexicon.signature
    try:
        d = _gold_derivation(entry)
    except ReplayError as e:
        return [(False, "replay", str(e))]
    goal = entry.goal(sig)
    ok = d.final.category == goal
    out.append((ok, "replay", f"final {print_category(d.final.category)}" + ("" if ok else f", expected {print_category(goal)}")))

    g, _ = cg_to_dg(d)
    missing = sorted(entry.gold_dependency_edges - g.edges)
    extra = sorted(g.edges - entry.gold_dependency_edges)
    problems = [f"gold edge {h}->{dep} not produced" for h, dep in missing]
    problems += [f"edge {h}->{dep} not in gold" for h, dep in extra]
    if g.root != entry.gold_root:
        problems.append(f"root {g.root}, gold root {entry.gold_root}")
    out.append((not problems, "cg2dg", "; ".join(problems) or f"{len(g.edges)} edges match"))

    if entry.gold_psg_rules:
        _, rules = cg_to_psg(d, signature=sig)
        got, want = set(rules), set(entry.gold_psg_rules)
        problems = [f"missing {r}" for r in sorted(want - got, key=str)]
        problems += [f"unexpected {r}" for r in sorted(got - want, key=str)]
        out.append((not problems, "cg2psg", "; ".join(problems) or f"{len(want)} rules match"))

    try:
        back = dg_to_cg(entry.gold_graph, entry.sentence, "script", lexicon=entry.lexicon)
        same = sorted(back.key) == sorted(d.key)
        detail = "step multiset preserved" if same else "dependency tree yields a different step multiset"
        rt = round_trip_check(d, signature=sig)
        out.append((same and rt.ok, "round-trip", detail if rt.ok else str(rt)))
    except ConversionError as e:
        out.append((False, "round-trip", str(e)))

    report = projectivity(entry.gold_graph)
    if report.projective:
        detail = "projective"
    else:
        bad = ", ".join(f"{h}->{dep}" for h, dep in sorted(report.non_projective_edges))
        detail = f"non-projective edges {bad}"
    out.append((None, "projectivity", detail))
    return out


def cmd_check(args) -> int:
    entries = []
    if args.builtin:
        entries.extend(builtin_entry(i) for i in BUILTIN_IDS)
    for path in args.entries:
        entries.append(_load_entry(path, args.lexicon))
    if not entries:
        _err("nothing to check")
        return EXIT_INPUT
    lines, all_ok = [], True
    for entry in entries:
        for passed, name, detail in _check_entry(entry):
            status = "INFO" if passed is None else ("PASS" if passed else "FAIL")
            all_ok &= passed is not False
            lines.append(f"{status} {entry.id} {name}: {detail}")
    text = "\n".join(lines) + "\n"
    _emit(args, to_ascii(text) if args.ascii else text)
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_corpus(args) -> int:
    if args.action == "list":
        lines = []
        for i in BUILTIN_IDS:
            e = builtin_entry(i)
            words = " ".join(e.sentence.forms)
            lines.append(f"{i}\t{e.sentence.language}\t{len(e.sentence)}\t{words}")
        _emit(args, "\n".join(lines) + "\n")
        return EXIT_OK
    if not args.id:
        raise InputError("corpus dump needs an entry id")
    if args.id not in BUILTIN_IDS:
        raise InputError(f"unknown entry {args.id!r}; try 'corpus list'")
    if args.lexicon_only:
        _emit(args, dump_lexicon(builtin_lexicon(args.id)))
    else:
        _emit(args, dump_corpus_entry(builtin_entry(args.id)))
    return EXIT_OK


def cmd_render(args) -> int:
    if args.input and not args.builtin:
        text = _read(args.input)
        if not text.lstrip().startswith("#SENT"):
            blocks = read_tabular(text)
            fmt = args.format or "tabular"
            if fmt not in ("tabular", "dot"):
                raise InputError("a tabular dependency file renders only as tabular or dot")
            chunks = []
            for rows, g in blocks:
                s = Sentence.from_pairs(rows)
                if fmt == "dot":
                    chunks.append(render_dot(g, s, not args.ascii))
                else:
                    chunks.append(render_dependency_tabular(g, s, not args.ascii))
            _emit(args, "\n".join(chunks))
            return EXIT_OK
    entry = _entry_from_args(args)
    d = _gold_derivation(entry)
    _emit(args, render(d, _options(args, "table"), signature=entry.lexicon.signature))
    return EXIT_OK


def _common(p, formats=True):
    p.add_argument("--lexicon", metavar="PATH", help="lexicon file (default: sibling .lex file)")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    if formats:
        p.add_argument("--format", choices=FORMATS, help="output format")
        p.add_argument("--show-indices", action="store_true", help="index every bracket and leaf")
    p.add_argument("--ascii", action="store_true", help="transliterate output to ASCII")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triform",
        description="Categorial, dependency and phrase-structure analyses and conversions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="search for categorial derivations")
    p.add_argument("input", nargs="?", help="sentence file in corpus-entry format")
    p.add_argument("--builtin", choices=BUILTIN_IDS, metavar="ID", help="use a shipped entry")
    p.add_argument("--wrap", dest="wrap", action="store_true", default=True, help="let non-adjacent constituents combine (default)")
    p.add_argument("--no-wrap", dest="wrap", action="store_false", help="combine adjacent constituents only")
    p.add_argument("--type-raise", action="store_true", help="allow raising atomic constituents")
    p.add_argument("--max-results", type=int, default=64, metavar="N", help="print at most N derivations (default 64)")
    _common(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("convert", help="convert between formalisms")
    p.add_argument("direction", choices=("cg2dg", "dg2cg", "cg2psg"))
    p.add_argument("input", nargs="?", help="corpus entry, or tabular dependencies for dg2cg")
    p.add_argument("--builtin", choices=BUILTIN_IDS, metavar="ID", help="use a shipped entry")
    p.add_argument("--infer", action="store_true", help="dg2cg: synthesize categories")
    _common(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("check", help="verify corpus entries in all three formalisms")
    p.add_argument("entries", nargs="*", help="corpus entry files")
    p.add_argument("--builtin", action="store_true", help="check every shipped entry")
    _common(p, formats=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("corpus", help="list or dump the shipped corpus")
    p.add_argument("action", choices=("list", "dump"))
    p.add_argument("id", nargs="?", help="entry id for dump")
    p.add_argument("--lexicon-only", action="store_true", help="dump the entry's lexicon")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("render", help="render an entry's gold derivation or a dependency file")
    p.add_argument("input", nargs="?", help="corpus entry, or tabular dependencies")
    p.add_argument("--builtin", choices=BUILTIN_IDS, metavar="ID", help="use a shipped entry")
    _common(p)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if getattr(args, "max_results", 1) is not None and getattr(args, "max_results", 1) < 1:
        _err("--max-results must be at least 1")
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as e:
        _err(f"error: {e}")
        return EXIT_INPUT
    except INPUT_ERRORS as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        _err(f"error: {message}")
        return EXIT_INPUT
    except (ConversionError, ReplayError) as e:
        _err(f"conversion failed: {e}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
