import random

import pytest
from hypothesis import given, settings

from oracles import parity_by_reachability
from strategies import parity_graphs
from univparity import (
    PreconditionError,
    PriorityGraph,
    enumerate_trees,
    graph_of_tree,
    is_homomorphism,
    is_maximal,
    is_tree_like,
    random_parity_graph,
    saturate,
    satisfies_parity,
)


def test_single_vertex_gets_its_zero_loop():
    g = saturate(PriorityGraph(2, ("v",), frozenset()))
    assert g.edges == {("v", 0, "v")}


def test_single_odd_edge():
    g = saturate(PriorityGraph(2, ("a", "b"), frozenset({("a", 1, "b")})))
    assert g.edges == {("a", 0, "a"), ("b", 0, "b"), ("a", 0, "b"), ("a", 1, "b")}
    assert is_tree_like(g)
    # every triple left out closes an odd cycle
    for v in g.vertices:
        for i in range(2):
            for w in g.vertices:
                if (v, i, w) not in g.edges:
                    assert not parity_by_reachability(g.add_edge(v, i, w))


def test_tree_graphs_are_fixpoints():
    for d in (2, 4):
        for n in range(1, 5):
            for t in enumerate_trees(n, d):
                g = graph_of_tree(t)
                assert saturate(g) == g
                assert is_maximal(g)


def test_odd_cycle_rejected_with_witness():
    g = PriorityGraph(2, ("a", "b"), frozenset({("a", 0, "b"), ("b", 1, "a")}))
    with pytest.raises(PreconditionError) as exc:
        saturate(g)
    assert exc.value.witness.is_cycle and max(exc.value.witness.priorities) == 1


def test_odd_d_rejected():
    with pytest.raises(ValueError):
        saturate(PriorityGraph(3, (0,), frozenset()))


def test_is_maximal_examples():
    assert not is_maximal(PriorityGraph(2, ("v",), frozenset()))
    # an even self-loop can still be added at b
    g = PriorityGraph(2, ("a", "b"), frozenset({("a", 0, "a")}))
    assert not is_maximal(g)
    with pytest.raises(PreconditionError):
        is_maximal(PriorityGraph(2, ("v",), frozenset({("v", 1, "v")})))


@settings(max_examples=300, deadline=None)
@given(parity_graphs(max_n=5, max_d=4, d=4))
def test_saturation_properties(g):
    s = saturate(g)
    assert s.vertices == g.vertices and g.edges <= s.edges
    assert satisfies_parity(s)
    assert is_tree_like(s)
    assert is_maximal(s)
    assert saturate(s) == s
    assert is_homomorphism(g, s, {v: v for v in g.vertices})


def test_debug_mode_cross_checks_every_step():
    rng = random.Random(11)
    for _ in range(100):
        g = random_parity_graph(4, 4, rng)
        assert saturate(g, debug=True) == saturate(g)


def test_custom_order_still_gives_tree_like_result():
    rng = random.Random(3)
    for _ in range(100):
        g = random_parity_graph(4, 4, rng)
        order = [(v, i, w) for v in g.vertices for i in range(4) for w in g.vertices]
        rng.shuffle(order)
        s = saturate(g, order=order)
        assert is_tree_like(s) and is_maximal(s) and len(s) == len(g)
