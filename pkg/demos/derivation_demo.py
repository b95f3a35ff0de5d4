"""Search for derivations of a free word order sentence, with and without wrapping."""

from triform.corpus import builtin_entry
from triform.derivation import derive
from triform.render import render_derivation_table

entry = builtin_entry("ex7-kwakwala")
print(" ".join(entry.sentence.forms))
if entry.sentence.translation:
    print(f"'{entry.sentence.translation}'")

found = derive(entry.sentence, entry.lexicon_assignment)
print(f"\n{len(found)} derivations with wrapping; the first:\n")
print(render_derivation_table(found[0]))

plain = derive(entry.sentence, entry.lexicon_assignment, allow_wrapping=False)
print(f"derivations when only adjacent constituents may combine: {len(plain)}")
