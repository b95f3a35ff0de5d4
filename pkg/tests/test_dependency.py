import random
from itertools import combinations, product

import pytest

from oracles import connected_subsets, crossing_projective, is_spanning_arborescence
from triform.dependency import (
    MAX_CONSTITUENT_TOKENS,
    CycleError,
    DependencyError,
    DisconnectedError,
    InvalidRootError,
    MultipleHeadsError,
    MultipleRootsError,
    conforms,
    delta,
    dependency_constituents,
    graph_from_heads,
    parse_dependency_rule,
    projectivity,
    read_tabular,
    validate,
    write_tabular,
)


def test_validate_gold(entries):
    e = entries["ex10-german"]
    g = validate(6, e.gold_dependency_edges, 2)
    assert g.root == 2 and g.head_list() == [2, 0, 6, 2, 4, 5]


@pytest.mark.parametrize(
    "n, edges, root, error",
    [
        (2, {(1, 2), (2, 1)}, 1, CycleError),
        (4, {(1, 2), (1, 3)}, 1, DisconnectedError),
        (3, {(1, 3), (2, 3)}, 1, MultipleHeadsError),
        (3, {(1, 2), (2, 3)}, 2, InvalidRootError),
        (3, {(1, 2), (1, 4)}, 1, DependencyError),
        (2, {(1, 1)}, 1, CycleError),
        (3, {(1, 2)}, 5, InvalidRootError),
    ],
)
def test_validate_errors(n, edges, root, error):
    with pytest.raises(error):
        validate(n, edges, root)


def test_graph_from_heads_roots():
    with pytest.raises(MultipleRootsError):
        graph_from_heads([0, 0, 1])
    with pytest.raises(MultipleRootsError):
        graph_from_heads([2, 1])
    assert graph_from_heads([0]).n == 1


def _all_edges(n):
    return [(h, d) for h in range(1, n + 1) for d in range(1, n + 1) if h != d]


def _accepts(n, edges, root):
    try:
        validate(n, edges, root)
        return True
    except DependencyError:
        return False


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_validate_exhaustive(n):
    possible = _all_edges(n)
    for mask in range(1 << len(possible)):
        edges = [e for k, e in enumerate(possible) if mask >> k & 1]
        for root in range(1, n + 1):
            assert _accepts(n, edges, root) == is_spanning_arborescence(n, edges, root)


def test_validate_exhaustive_five_tokens_near_tree_sizes():
    # every edge set of size 3..5 over five tokens: one short of, exactly, and
    # one more than a spanning tree
    n = 5
    possible = _all_edges(n)
    checked = 0
    for size in (3, 4, 5):
        for edges in combinations(possible, size):
            for root in range(1, n + 1):
                assert _accepts(n, edges, root) == is_spanning_arborescence(n, edges, root)
                checked += 1
    assert checked > 100_000


def test_delta_examples(entries):
    g = entries["ex10-german"].gold_graph
    assert delta(g) == {2: 0, 1: 1, 4: 1, 5: 2, 6: 3, 3: 4}
    assert delta(entries["ex11-croatian"].gold_graph) == {2: 0, 4: 1, 3: 1, 1: 2}
    assert delta(graph_from_heads([0])) == {1: 0}
    assert delta(g, offset=1)[2] == 1


def random_heads(n, rng):
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = [0] * n
    for k, v in enumerate(order[1:], 1):
        heads[v - 1] = rng.choice(order[:k])
    return heads


def all_trees(n):
    for heads in product(range(n + 1), repeat=n):
        try:
            yield graph_from_heads(list(heads))
        except DependencyError:
            continue


def test_delta_strictly_increases_along_edges(entries):
    rng = random.Random(7)
    graphs = [e.gold_graph for e in entries.values()]
    graphs += [graph_from_heads(random_heads(rng.randint(1, 10), rng)) for _ in range(500)]
    for g in graphs:
        v = delta(g)
        assert v[g.root] == 0
        for h, d in g.edges:
            assert v[d] == v[h] + 1 > v[h]


def test_projectivity_examples(entries):
    report = projectivity(entries["ex-np-english"].gold_graph)
    assert not report.projective and (2, 5) in report.non_projective_edges
    report = projectivity(entries["ex10-german"].gold_graph)
    assert not report.projective and report.non_projective_edges == {(6, 3)}
    assert projectivity(graph_from_heads([0, 1, 2, 3])).projective
    assert projectivity(entries["ex9-english"].gold_graph).projective


def test_crossings_include_root_line(entries):
    report = projectivity(entries["ex-np-english"].gold_graph)
    assert ((0, 3), (2, 5)) in report.crossings


def test_projectivity_exhaustive_small():
    count = 0
    for n in range(1, 6):
        for g in all_trees(n):
            report = projectivity(g)
            assert report.projective == crossing_projective(g.head_list())
            assert report.projective == (not report.crossings)
            count += 1
    assert count == 1 + 2 + 9 + 64 + 625


def test_projectivity_random_large():
    rng = random.Random(2024)
    cases = 0
    for _ in range(10_000):
        n = rng.randint(6, 8)
        g = graph_from_heads(random_heads(n, rng))
        report = projectivity(g)
        assert report.projective == crossing_projective(g.head_list())
        assert report.projective == (not report.crossings)
        cases += 1
    assert cases >= 10_000


def test_dependency_rule_parse_and_match():
    rule = parse_dependency_rule("V(N1 * N2, Adv)")
    assert rule.left_deps == ("N1",) and rule.right_deps == ("N2", "Adv")
    assert str(rule) == "V(N1 * N2, Adv)"
    assert rule.matches("V", ["N"], ["N", "Adv"])
    assert not rule.matches("V", ["N", "N"], ["N", "Adv"])
    assert parse_dependency_rule("I(*)").matches("Det", [], []) is False
    assert parse_dependency_rule("*(*)").matches("Det", [], [])
    with pytest.raises(ValueError):
        parse_dependency_rule("V(N1 N2)")


def test_conforms_examples():
    # John saw Mary quickly: V(N1 * N2, Adv)
    g = graph_from_heads([2, 0, 2, 2])
    pos = ["N", "V", "N", "Adv"]
    rules = [parse_dependency_rule(r) for r in ("V(N1 * N2, Adv)", "N(*)", "Adv(*)")]
    assert conforms(g, pos, rules) == (True, None)
    # two subjects on the left
    g2 = graph_from_heads([3, 3, 0, 3])
    ok, violation = conforms(g2, ["N", "N", "V", "N"], [parse_dependency_rule("V(N1 * N2)"), parse_dependency_rule("N(*)")])
    assert not ok and violation.startswith("token 3")
    # a leaf needs a leaf rule
    ok, violation = conforms(graph_from_heads([0, 1]), ["V", "N"], [parse_dependency_rule("V(* N)")])
    assert not ok and "token 2" in violation


def test_ex9_constituents(entries):
    g = entries["ex9-english"].gold_graph
    found = dependency_constituents(g)
    expected_continuous = [{1, 2}, {3, 4}, {2, 3, 4}, {1}, {2}, {3}, {4}, {1, 2, 3, 4}]
    for s in expected_continuous:
        assert (frozenset(s), True) in found
    assert (frozenset({2, 4}), False) in found


def test_constituents_chain_and_single():
    chain = graph_from_heads([2, 3, 0])
    found = dependency_constituents(chain)
    assert {s for s, _ in found} == {frozenset(x) for x in ({1}, {2}, {3}, {1, 2}, {2, 3}, {1, 2, 3})}
    assert all(c for _, c in found)
    assert dependency_constituents(graph_from_heads([0])) == {(frozenset({1}), True)}


@pytest.mark.parametrize("n", range(1, 9))
def test_constituents_match_subset_oracle_on_chains(n):
    g = graph_from_heads([i + 1 if i < n else 0 for i in range(1, n + 1)])
    found = dependency_constituents(g)
    assert {s for s, _ in found} == connected_subsets(n, g.edges)


def test_constituents_match_subset_oracle(entries):
    rng = random.Random(3)
    graphs = [e.gold_graph for e in entries.values()]
    graphs += [graph_from_heads(random_heads(rng.randint(1, 9), rng)) for _ in range(200)]
    for g in graphs:
        found = dependency_constituents(g)
        assert {s for s, _ in found} == connected_subsets(g.n, g.edges)
        for s, continuous in found:
            assert continuous == (max(s) - min(s) + 1 == len(s))
        for v in range(1, g.n + 1):
            assert any(s == frozenset(g.descendants(v) | {v}) for s, _ in found)


def test_constituents_guard():
    g = graph_from_heads([0] + [1] * MAX_CONSTITUENT_TOKENS)
    with pytest.raises(DependencyError):
        dependency_constituents(g)


def test_tabular_round_trip(entries):
    e = entries["ex10-german"]
    rows = list(zip(e.sentence.forms, e.sentence.pos))
    text = write_tabular(rows, e.gold_graph) + write_tabular(rows, e.gold_graph)
    blocks = read_tabular(text)
    assert len(blocks) == 2
    assert blocks[0] == (rows, e.gold_graph)


def test_tabular_errors():
    with pytest.raises(DependencyError, match="line 1"):
        read_tabular("1\tx\tN\n")
    with pytest.raises(DependencyError, match="expected index 2"):
        read_tabular("1\tx\tN\t0\n3\ty\tN\t1\n")
    with pytest.raises(DependencyError):
        read_tabular("1\tx\tN\t2\n2\ty\tN\t1\n")
