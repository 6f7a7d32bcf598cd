import random

import pytest

from unires.graph import (
    DomainError,
    Graph,
    ParseError,
    ValidationError,
    anchor,
    classify,
    load_graph,
    load_hierarchy,
    serialize_graph,
    serialize_hierarchy,
)

from conftest import names, random_graph_on, random_hierarchy, random_pair

FOUR_GRAPH = "A\tB\na1\ta2\n"
FOUR_TREE = "Br\tA\nBr\tB\nA\ta1\nA\ta2\n"


def four_pair():
    g = load_graph(FOUR_GRAPH)
    t = load_hierarchy(FOUR_TREE, g)
    return g.with_vertices(t.vertices), t


def test_load_graph_default_weight():
    g = load_graph("a\tb\nb\tc")
    assert g.vertices == ("a", "b", "c")
    assert g.weights == {("a", "b"): 1.0, ("b", "c"): 1.0}


def test_load_graph_duplicate_lines_sum():
    g = load_graph("a\tb\t2.0\na\tb\t3.0\n")
    assert g.weights == {("a", "b"): 5.0}


def test_load_graph_self_loop_rejected():
    with pytest.raises(ParseError) as err:
        load_graph("a\ta\n")
    assert err.value.line == 1


def test_load_graph_line_numbers_and_field_errors():
    with pytest.raises(ParseError) as err:
        load_graph("a\tb\nc\n")
    assert err.value.line == 2
    with pytest.raises(ParseError) as err:
        load_graph("a\tb\na\tb\t-1\n")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        load_graph("a\tb\tzero\n")
    with pytest.raises(ParseError):
        load_graph("a \tb\n")  # trailing whitespace in a name


def test_load_graph_comments_and_blank_lines():
    g = load_graph("# header\n\na\tb\n")
    assert g.weights == {("a", "b"): 1.0}


def test_load_hierarchy_well_formed():
    g, t = four_pair()
    assert t.root == "Br"
    assert t.children["A"] == ("a1", "a2")
    assert set(g.vertices) == set(t.vertices)


def test_load_hierarchy_cycle():
    g = load_graph(FOUR_GRAPH)
    with pytest.raises(ValidationError, match="cycle"):
        load_hierarchy(FOUR_TREE + "a1\tBr\n", g)


def test_load_hierarchy_two_parents():
    g = load_graph(FOUR_GRAPH)
    with pytest.raises(ValidationError, match="two parents"):
        load_hierarchy(FOUR_TREE + "B\ta1\n", g)


def test_load_hierarchy_multiple_roots():
    g = load_graph("a\tb\n")
    with pytest.raises(ValidationError, match="multiple roots"):
        load_hierarchy("r1\ta\nr2\tb\n", g)


def test_load_hierarchy_missing_graph_vertex():
    g = load_graph(FOUR_GRAPH + "x\tB\n")
    with pytest.raises(ValidationError, match="'x'"):
        load_hierarchy(FOUR_TREE, g)


def test_leafset_examples():
    _, t = four_pair()
    assert t.leafset("A") == {"a1", "a2"}
    assert t.leafset("B") == {"B"}
    assert t.leafset("Br") == {"a1", "a2", "B"}


def test_leafset_unknown_vertex():
    _, t = four_pair()
    with pytest.raises(DomainError):
        t.leafset("nope")


def test_depth_examples():
    _, t = four_pair()
    assert t.depth("Br") == 1
    assert t.depth("A") == 2
    assert t.depth("a1") == 3


def test_classify_example():
    g, t = four_pair()
    cls = classify(g, t)
    assert cls.internal_with_connectivity == {"A"}
    assert cls.leaves_with_connectivity == {"a1", "a2", "B"}
    assert cls.silent == {"Br"}


def test_classify_edgeless_graph_all_silent():
    g = load_graph("")
    t = load_hierarchy(FOUR_TREE, g)
    cls = classify(g, t)
    assert not cls.internal_with_connectivity
    assert not cls.leaves_with_connectivity
    assert cls.silent == set(t.vertices)


def test_classify_leaf_only_graph_has_no_internal():
    g = load_graph("a1\ta2\n")
    t = load_hierarchy(FOUR_TREE, g)
    assert not classify(g, t).internal_with_connectivity


def test_classify_partition_property():
    rng = random.Random(11)
    for _ in range(50):
        g, t = random_pair(rng, rng.randrange(4, 30))
        cls = classify(g, t)
        sets = (cls.internal_with_connectivity, cls.leaves_with_connectivity, cls.silent)
        assert sum(map(len, sets)) == len(t.vertices)
        assert frozenset().union(*sets) == set(t.vertices)


def test_anchor_examples():
    g, t = four_pair()
    assert anchor(g, t, "a1") == "A"
    assert anchor(g, t, "B") == "B"


def test_anchor_topmost_wins_when_nested():
    g = load_graph("A\tB\nA1\tB\na1\tB\n")
    t = load_hierarchy("Br\tA\nBr\tB\nA\tA1\nA1\ta1\n", g)
    assert anchor(g, t, "a1") == "A"
    assert anchor(g, t, "A1") == "A"


def test_anchor_requires_connectivity():
    g, t = four_pair()
    with pytest.raises(DomainError):
        anchor(g, t, "Br")


def test_anchor_idempotent():
    rng = random.Random(23)
    for _ in range(30):
        g, t = random_pair(rng, rng.randrange(4, 25))
        for v in g.active_vertices():
            a = anchor(g, t, v)
            assert anchor(g, t, a) == a


def test_leafset_members_are_leaves_and_laminar():
    rng = random.Random(31)
    for _ in range(20):
        t = random_hierarchy(rng, names(rng.randrange(3, 25)))
        sets = {v: t.leafset(v) for v in t.vertices}
        for v, ls in sets.items():
            assert ls
            assert all(t.is_leaf(x) for x in ls)
        for a in t.vertices:
            for b in t.vertices:
                if a < b:
                    inter = sets[a] & sets[b]
                    assert not inter or sets[a] <= sets[b] or sets[b] <= sets[a]


def test_round_trip_graph_and_hierarchy():
    rng = random.Random(47)
    for _ in range(25):
        t = random_hierarchy(rng, names(rng.randrange(3, 20)))
        g = random_graph_on(rng, t, edge_budget=rng.randrange(1, 30))
        g_loaded = load_graph(serialize_graph(g))
        assert g_loaded.weights == g.weights
        t_loaded = load_hierarchy(serialize_hierarchy(t), g_loaded)
        assert t_loaded == t
        # The pair round-trips exactly once the universe is restored.
        assert g_loaded.with_vertices(t_loaded.vertices) == g


def test_graph_rejects_bad_construction():
    with pytest.raises(ValidationError):
        Graph.from_edges({("a", "a"): 1.0})
    with pytest.raises(ValidationError):
        Graph.from_edges({("a", "b"): 0.0})
    with pytest.raises(ValidationError):
        Graph(("a",), {("a", "b"): 1.0})
