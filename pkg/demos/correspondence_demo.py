"""Convert a gold derivation to dependencies and phrase structure and back."""

from triform.corpus import builtin_entry
from triform.correspondence import cg_to_dg, cg_to_psg, dg_to_cg, round_trip_check
from triform.derivation import replay
from triform.render import render_bracketed, render_correspondence_report, render_dependency_tabular

e = builtin_entry("ex12-kalkatungu")
d = replay(e.sentence, e.lexicon_assignment, e.gold_step_script)

g, records = cg_to_dg(d)
print("dependencies:")
print(render_dependency_tabular(g, e.sentence))
print("step by step (! marks a functor or argument that is not the head or dependent):")
print(render_correspondence_report(records))
print(render_correspondence_report(records, forms=True))

tree, rules = cg_to_psg(d)
print(render_bracketed(tree))
for rule in rules:
    print(" ", rule)

rebuilt = dg_to_cg(e.gold_graph, e.sentence, "infer")
print("\ncategories invented from the graph alone:")
for form, cat in zip(e.sentence.forms, rebuilt.assignment):
    print(f"  {form}: {cat}")
print("\nround trip:", round_trip_check(d))
