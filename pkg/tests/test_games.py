import random

import pytest

from oracles import eve_winning_naive, safety_win_naive
from univparity import (
    ADAM,
    EVE,
    ParityGame,
    PositionalStrategy,
    PreconditionError,
    PriorityGraph,
    SafetyAutomaton,
    automaton_from_tree,
    complete_universal_tree,
    graph_of_tree,
    product_with_automaton,
    product_with_graph,
    random_game,
    random_parity_graph,
    restrict_to_strategy,
    saturate,
    satisfies_parity,
    solve_parity_via_automaton,
    solve_parity_via_universal,
    solve_safety,
    strategy_is_winning,
    zielonka,
)
from univparity.games import SafetyGame, complete_dead_ends, product_safety_game


def game(d, edges, eve, vertices=None):
    edges = frozenset(edges)
    vs = vertices or tuple(sorted({e[0] for e in edges} | {e[2] for e in edges}, key=str))
    return ParityGame(PriorityGraph(d, vs, edges), frozenset(eve))


def all_routes(g):
    n, d = len(g), g.d + g.d % 2
    tree = complete_universal_tree(n, d)
    return [zielonka(g), solve_parity_via_universal(g, graph_of_tree(tree)),
            solve_parity_via_automaton(g, automaton_from_tree(tree))]


# --- games and strategies --------------------------------------------------


def test_dead_ends_rejected_or_completed():
    g = PriorityGraph(2, (0, 1), frozenset({(0, 0, 1)}))
    with pytest.raises(PreconditionError):
        ParityGame(g, frozenset({0}))
    eve_stuck = ParityGame(complete_dead_ends(g, {1}), frozenset({1}))
    adam_stuck = ParityGame(complete_dead_ends(g, set()), frozenset())
    assert zielonka(eve_stuck).winner == {0: ADAM, 1: ADAM}
    assert zielonka(adam_stuck).winner == {0: EVE, 1: EVE}


def test_restrict_all_adam_game_is_unchanged():
    g = game(2, [(0, 0, 1), (1, 1, 0), (1, 0, 1)], eve=())
    assert restrict_to_strategy(g, PositionalStrategy(EVE, {})) == g.graph


def test_restrict_keeps_chosen_loop():
    g = game(2, [("v", 0, "v"), ("v", 1, "v")], eve={"v"})
    r = restrict_to_strategy(g, PositionalStrategy(EVE, {"v": ("v", 0, "v")}))
    assert r.edges == {("v", 0, "v")}


def test_invalid_strategy_rejected():
    g = game(2, [("v", 0, "v"), ("v", 1, "v")], eve={"v"})
    with pytest.raises(ValueError):
        restrict_to_strategy(g, PositionalStrategy(EVE, {}))
    with pytest.raises(ValueError):
        restrict_to_strategy(g, PositionalStrategy(EVE, {"v": ("v", 0, "w")}))


# --- safety games ----------------------------------------------------------


def test_product_trivial_cases():
    g = game(2, [("v", 0, "v")], eve={"v"})
    u = PriorityGraph(2, ("u",), frozenset({("u", 0, "u")}))
    assert ("at", "v", "u") in solve_safety(product_with_graph(g, u)).eve_win
    g1 = game(2, [("v", 1, "v")], eve={"v"})
    u1 = saturate(PriorityGraph(2, ("u",), frozenset()))
    res = solve_safety(product_with_graph(g1, u1))
    assert ("at", "v", "u") not in res.eve_win


def test_product_size_bound():
    rng = random.Random(1)
    for _ in range(30):
        g = random_game(5, 4, rng)
        u = graph_of_tree(complete_universal_tree(2, 4))
        sg = product_with_graph(g, u)
        assert len(sg) == len(g) * len(u) + len(g.graph.edges) * len(u)
        assert len(sg) <= len(g) * len(u) * (1 + max(len(g.graph.out_edges(v)) for v in g.vertices))


def test_product_needs_enough_priorities():
    from univparity import IncompatiblePriorities

    g = game(4, [(0, 3, 0)], eve={0})
    with pytest.raises(IncompatiblePriorities):
        product_with_graph(g, graph_of_tree(complete_universal_tree(1, 2)))


def test_safety_without_dead_ends_is_all_eve():
    sg = SafetyGame((0, 1, 2), frozenset({0, 2}), {0: (1,), 1: (2, 0), 2: (2,)})
    assert solve_safety(sg).eve_win == {0, 1, 2}


def test_safety_all_moves_to_dead_ends():
    sg = SafetyGame((0, 1, 2), frozenset({0, 1, 2}), {0: (2,), 1: (2,), 2: ()})
    assert solve_safety(sg).eve_win == frozenset()


def _random_arena(rng, size):
    positions = tuple(range(size))
    eve = frozenset(p for p in positions if rng.random() < 0.5)
    succ = {p: tuple(sorted(set(rng.choice(positions) for _ in range(rng.randint(0, 3))))) for p in positions}
    return SafetyGame(positions, eve, succ)


def test_safety_matches_naive_fixpoint():
    rng = random.Random(4)
    for _ in range(200):
        sg = _random_arena(rng, rng.randint(1, 50))
        res = solve_safety(sg)
        assert set(res.eve_win) == safety_win_naive(sg)
        assert res.eve_win | res.adam_win == set(sg.positions)
        for p, q in res.strategy.items():
            assert q in sg.succ[p] and q in res.eve_win


# --- parity solving --------------------------------------------------------


def test_single_vertex_games():
    for r in all_routes(game(2, [("v", 0, "v")], eve={"v"})):
        assert r.winner == {"v": EVE} and r.eve_region == {"v"}
    for r in all_routes(game(2, [("v", 1, "v")], eve={"v"})):
        assert r.winner == {"v": ADAM}
    for r in all_routes(game(2, [("v", 1, "v")], eve=())):
        assert r.adam_region == {"v"}


def test_two_vertex_game_against_profile_enumeration():
    g = game(2, [("a", 1, "b"), ("a", 0, "a"), ("b", 0, "a")], eve={"a"})
    want = eve_winning_naive(g)
    assert want == {"a", "b"}
    for r in all_routes(g):
        assert r.eve_region == want


def test_automaton_route_rejects_nondeterminism():
    a = SafetyAutomaton(2, 0, frozenset({(0, 0, 0), (0, 0, 1), (1, 0, 1)}))
    with pytest.raises(PreconditionError):
        solve_parity_via_automaton(game(2, [(0, 0, 0)], eve={0}), a)


def test_verify_flag_catches_non_universal_graph():
    g = game(2, [(0, 1, 1), (1, 0, 0)], eve={0})
    with pytest.raises(PreconditionError):
        solve_parity_via_universal(g, graph_of_tree(complete_universal_tree(1, 2)), verify=True)
    solve_parity_via_universal(g, graph_of_tree(complete_universal_tree(2, 2)), verify=True)


def test_routes_agree_with_strategy_enumeration():
    rng = random.Random(8)
    for _ in range(150):
        g = random_game(5, rng.choice([2, 3, 4]), rng)
        want = eve_winning_naive(g)
        for r in all_routes(g):
            assert r.eve_region == want, r.route
            assert r.eve_region | r.adam_region == set(g.vertices)
            assert not (r.eve_region & r.adam_region)


def test_strategies_are_winning():
    rng = random.Random(9)
    for _ in range(150):
        g = random_game(6, rng.choice([3, 4]), rng)
        for r in all_routes(g):
            assert r.eve_strategy is not None
            assert strategy_is_winning(g, r.eve_strategy, r.eve_region)
            sub = restrict_to_strategy(g, r.eve_strategy).induced(r.eve_region)
            assert satisfies_parity(sub)
        z = zielonka(g)
        assert strategy_is_winning(g, z.adam_strategy, z.adam_region)


def test_product_strategy_survives():
    rng = random.Random(10)
    u = graph_of_tree(complete_universal_tree(4, 4))
    for _ in range(40):
        g = random_game(4, 4, rng)
        r = solve_parity_via_universal(g, u)
        sg = product_with_graph(g, u)
        win = solve_safety(sg).eve_win
        for p, q in r.product_strategy.items():
            assert p in win and q in win and q in sg.succ[p]


def test_larger_universal_graph_never_shrinks_eve_region():
    rng = random.Random(12)
    for _ in range(60):
        g = random_game(4, 4, rng)
        small = random_parity_graph(3, 4, rng)
        big = saturate(small)
        a = solve_parity_via_universal(g, small).eve_region
        b = solve_parity_via_universal(g, big).eve_region
        assert a <= b


def test_adam_strategy_check_detects_losing_strategy():
    g = game(2, [("v", 0, "v"), ("v", 1, "v")], eve=())
    assert strategy_is_winning(g, PositionalStrategy(ADAM, {"v": ("v", 1, "v")}), {"v"})
    assert not strategy_is_winning(g, PositionalStrategy(ADAM, {"v": ("v", 0, "v")}), {"v"})


def test_generic_product_uses_step_function():
    g = game(2, [(0, 0, 0)], eve={0})
    sg = product_safety_game(g, lambda c, i: () if c == "dead" else (c,), ["ok", "dead"])
    res = solve_safety(sg)
    assert ("at", 0, "ok") in res.eve_win and ("at", 0, "dead") not in res.eve_win


def test_automaton_product_with_lifted_game():
    g = game(3, [(0, 2, 0), (0, 1, 0)], eve=())
    a = automaton_from_tree(complete_universal_tree(1, 4))
    assert solve_safety(product_with_automaton(g, a))
    assert solve_parity_via_automaton(g, a).winner == {0: ADAM}
