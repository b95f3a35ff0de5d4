"""Depth valuation, projectivity and dependency constituents."""

from triform.corpus import builtin_entry
from triform.dependency import delta, dependency_constituents, projectivity

for entry_id in ("ex9-english", "ex-np-english", "ex10-german"):
    e = builtin_entry(entry_id)
    g = e.gold_graph
    forms = e.sentence.forms
    report = projectivity(g)
    print(" ".join(forms))
    print("  depths:", {forms[i - 1]: v for i, v in sorted(delta(g).items())})
    print("  projective:", report.projective)
    for h, d in sorted(report.non_projective_edges):
        print(f"  non-projective edge {forms[h - 1]} -> {forms[d - 1]}")

g = builtin_entry("ex9-english").gold_graph
forms = builtin_entry("ex9-english").sentence.forms
print("\nconstituents of the first sentence:")
for tokens, continuous in sorted(dependency_constituents(g), key=lambda x: (len(x[0]), sorted(x[0]))):
    mark = "" if continuous else "  (discontinuous)"
    print("  {" + ", ".join(forms[i - 1] for i in sorted(tokens)) + "}" + mark)
