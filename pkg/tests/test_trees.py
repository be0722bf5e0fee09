import pytest
from hypothesis import given, settings

from oracles import embeds_by_deletion, graph_edges_of_tree, has_homomorphism, trees_by_subsets
from strategies import trees
from univparity import (
    BudgetExceeded,
    IncompatiblePriorities,
    OrderedTree,
    PreconditionError,
    PriorityGraph,
    complete_universal_tree,
    count_trees,
    embeds,
    enumerate_trees,
    find_homomorphism,
    graph_of_tree,
    is_tree_like,
    is_universal_tree,
    minimal_universal_tree,
    satisfies_parity,
    tree_of_graph,
)

ALL_TREES = [t for d in (2, 4) for n in range(1, 5) for t in enumerate_trees(n, d)]


def leaf(d=2):
    return OrderedTree(d, ((0,) * (d // 2),))


# --- the type --------------------------------------------------------------


def test_invariants_enforced():
    with pytest.raises(ValueError):
        OrderedTree(4, ((0, 0), (0,)))          # uneven height
    with pytest.raises(ValueError):
        OrderedTree(2, ((1,), (0,)))            # not increasing
    with pytest.raises(ValueError):
        OrderedTree(3, ((0,),))                 # odd d


def test_nested_round_trip():
    t = OrderedTree.from_nested(4, [2, 1, 3])
    assert t.size == 6 and t.height == 2
    assert t.to_nested() == [2, 1, 3]
    assert OrderedTree.from_nested(2, 3).leaves == ((0,), (1,), (2,))


# --- tree-like axioms ------------------------------------------------------


def test_single_zero_loop_is_tree_like():
    assert is_tree_like(PriorityGraph(2, ("v",), frozenset({("v", 0, "v")})))


def test_missing_reflexive_loop_is_reported():
    rep = is_tree_like(PriorityGraph(2, ("v",), frozenset()))
    assert not rep and rep.axiom == "even-reflexive" and rep.witness == ("v", 0, "v")


def test_each_axiom_can_be_the_first_failure():
    g = graph_of_tree(OrderedTree.from_nested(2, 2))
    assert is_tree_like(g.with_edges(g.edges - {(0, 1, 1)})).axiom == "odd-definition"
    # dropping both cross 0-edges keeps composition but breaks totality
    two = PriorityGraph(2, (0, 1), frozenset({(0, 0, 0), (1, 0, 1)}))
    assert is_tree_like(two).axiom == "even-total"
    # 0 -> 1 and 1 -> 0 on priority 1 composes to a 1-loop that is absent
    comp = PriorityGraph(2, (0, 1), frozenset({(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 0)}))
    assert is_tree_like(comp).axiom == "composition"


def test_odd_d_rejected():
    with pytest.raises(ValueError):
        is_tree_like(PriorityGraph(3, (0,), frozenset({(0, 0, 0)})))


def test_tree_like_consequences():
    for t in ALL_TREES:
        g = graph_of_tree(t)
        for i in range(0, t.d - 2, 2):
            assert {(v, w) for v, j, w in g.edges if j == i} <= {(v, w) for v, j, w in g.edges if j == i + 2}
        for i in range(1, t.d, 2):
            assert not any(g.has_edge(v, i, v) for v in g.vertices)


# --- tree -> graph ---------------------------------------------------------


def test_single_leaf_graph():
    g = graph_of_tree(leaf())
    assert g.edges == {(0, 0, 0)}


def test_two_leaf_graph():
    g = graph_of_tree(OrderedTree.from_nested(2, 2))
    assert g.edges == {(0, 0, 0), (1, 0, 1), (0, 0, 1), (0, 1, 1)}


def test_graph_of_tree_matches_node_definition():
    for t in ALL_TREES:
        assert graph_of_tree(t).edges == graph_edges_of_tree(t)


def test_graph_of_tree_is_tree_like_and_parity():
    for t in ALL_TREES:
        g = graph_of_tree(t)
        assert is_tree_like(g)
        assert satisfies_parity(g)


# --- graph -> tree ---------------------------------------------------------


def test_round_trip_all_small_trees():
    for t in ALL_TREES:
        assert tree_of_graph(graph_of_tree(t)) == t


def test_tree_of_non_tree_like_graph_raises():
    with pytest.raises(PreconditionError) as exc:
        tree_of_graph(PriorityGraph(2, ("v",), frozenset()))
    assert exc.value.witness.axiom == "even-reflexive"


def test_tree_of_graph_with_renamed_vertices():
    g = graph_of_tree(OrderedTree.from_nested(4, [1, 2])).relabel({0: "c", 1: "a", 2: "b"})
    assert tree_of_graph(g).to_nested() == [1, 2]


def test_split_ties_keeps_one_leaf_per_vertex():
    # two vertices that are E_0-equivalent: both 0-edges, no 1-edges
    g = PriorityGraph(2, (0, 1), frozenset({(0, 0, 0), (1, 0, 1), (0, 0, 1), (1, 0, 0)}))
    assert is_tree_like(g)
    assert tree_of_graph(g).size == 1
    assert tree_of_graph(g, split_ties=True).size == 2


# --- embeddings ------------------------------------------------------------


def test_identity_embedding():
    for t in ALL_TREES:
        e = embeds(t, t)
        assert e == {k: k for k in range(t.size)}


def test_pigeonhole():
    assert embeds(OrderedTree.from_nested(2, 2), leaf()) is None


def test_embed_mismatched_d():
    with pytest.raises(IncompatiblePriorities):
        embeds(leaf(2), leaf(4))


def test_embedding_agrees_with_deletion_and_homomorphism():
    small = [t for t in ALL_TREES if t.size <= 3]
    for d in (2, 4):
        ts = [t for t in small if t.d == d]
        for a in ts:
            for b in ts:
                e = embeds(a, b)
                assert (e is not None) == embeds_by_deletion(a, b)
                hom = find_homomorphism(graph_of_tree(a), graph_of_tree(b))
                assert (hom is not None) == (e is not None)
                assert (e is not None) == has_homomorphism(graph_of_tree(a), graph_of_tree(b))


@settings(max_examples=300, deadline=None)
@given(trees(max_n=4, d=4), trees(max_n=4, d=4))
def test_embedding_preserves_order_and_ancestors(a, b):
    e = embeds(a, b)
    if e is None:
        return
    images = [e[k] for k in range(a.size)]
    assert images == sorted(set(images))
    for depth in range(1, a.height):
        for x in range(a.size):
            for y in range(a.size):
                same = a.leaves[x][:depth] == a.leaves[y][:depth]
                assert same == (b.leaves[e[x]][:depth] == b.leaves[e[y]][:depth])


@settings(max_examples=200, deadline=None)
@given(trees(max_n=3, d=4), trees(max_n=3, d=4), trees(max_n=3, d=4))
def test_embedding_transitive_and_antisymmetric(a, b, c):
    if embeds(a, b) is not None and embeds(b, c) is not None:
        assert embeds(a, c) is not None
    if a.size == b.size and embeds(a, b) is not None and embeds(b, a) is not None:
        assert a == b


# --- enumeration and counting ----------------------------------------------


def test_enumeration_small_counts():
    assert len(list(enumerate_trees(1, 2))) == 1
    assert len(list(enumerate_trees(1, 6))) == 1
    assert len(list(enumerate_trees(2, 2))) == 1


@pytest.mark.parametrize("n,h", [(n, h) for n in range(1, 5) for h in (1, 2, 3)])
def test_enumeration_matches_structural_oracle(n, h):
    got = [t.leaves for t in enumerate_trees(n, 2 * h)]
    assert len(got) == len(set(got)) == count_trees(n, h)
    assert set(got) == trees_by_subsets(n, h)
    assert got == sorted(got)


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_trees(8, 6, budget=10))


# --- universal trees -------------------------------------------------------


@pytest.mark.parametrize("n,d", [(n, d) for n in (1, 2, 3) for d in (2, 4)])
def test_complete_tree_is_universal(n, d):
    t = complete_universal_tree(n, d)
    assert t.size == n ** (d // 2)
    assert is_universal_tree(t, n, d)


def test_complete_sizes():
    assert complete_universal_tree(1, 4).size == 1
    assert complete_universal_tree(2, 2).size == 2
    with pytest.raises(BudgetExceeded):
        complete_universal_tree(10, 12, budget=1000)


def test_single_leaf_not_universal_for_two():
    rep = is_universal_tree(leaf(), 2, 2)
    assert not rep and rep.counterexample == OrderedTree.from_nested(2, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_flat_tree_universal_for_d2(n):
    assert is_universal_tree(OrderedTree.from_nested(2, n), n, 2)


def test_universality_is_monotone():
    for t in ALL_TREES:
        for n in range(1, 4):
            if is_universal_tree(t, n, t.d):
                assert all(is_universal_tree(t, k, t.d) for k in range(1, n))


def test_exact_and_at_most_readings_agree():
    for t in ALL_TREES:
        for n in range(1, 4):
            assert bool(is_universal_tree(t, n, t.d)) == bool(is_universal_tree(t, n, t.d, exact=True))


@pytest.mark.parametrize("n,d,size", [(1, 2, 1), (2, 2, 2), (1, 4, 1), (2, 4, 3), (3, 4, 5)])
def test_minimal_sizes(n, d, size):
    t = minimal_universal_tree(n, d)
    assert t.size == size
    assert is_universal_tree(t, n, d)


def test_minimal_is_smallest_and_lex_first():
    t = minimal_universal_tree(3, 4)
    smaller = [c for k in range(1, t.size) for c in enumerate_trees(k, 4)]
    assert not any(is_universal_tree(c, 3, 4) for c in smaller)
    same = [c for c in enumerate_trees(t.size, 4) if is_universal_tree(c, 3, 4)]
    assert same[0] == t


def test_minimal_budget():
    with pytest.raises(BudgetExceeded):
        minimal_universal_tree(5, 6, budget=50)
