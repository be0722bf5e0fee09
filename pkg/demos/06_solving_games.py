"""
Solving parity games through safety games
=========================================

Pairing a parity game with a universal graph (or a separating automaton)
gives a safety game: Eve must keep the second component moving along
edges whose priority matches the move played.  Her winning region there
is her parity winning region.  Zielonka's recursive algorithm serves as a
cross-check.
"""

import random

from univparity import (
    automaton_from_tree,
    complete_universal_tree,
    graph_of_tree,
    random_game,
    restrict_to_strategy,
    satisfies_parity,
    solve_parity_via_automaton,
    solve_parity_via_universal,
    zielonka,
)
from univparity.io import dumps_game

rng = random.Random(4)
game = random_game(6, 4, rng, exact=True)
print(dumps_game(game))

tree = complete_universal_tree(len(game), 4)
results = [
    zielonka(game),
    solve_parity_via_universal(game, graph_of_tree(tree)),
    solve_parity_via_automaton(game, automaton_from_tree(tree)),
]
for r in results:
    sub = restrict_to_strategy(game, r.eve_strategy).induced(r.eve_region)
    print(f"{r.route:>10}: Eve wins {sorted(r.eve_region)}, strategy keeps parity: {bool(satisfies_parity(sub))}")

# the same check over a batch of games
disagree = 0
for _ in range(200):
    g = random_game(5, 4, rng)
    t = complete_universal_tree(len(g), 4)
    ref = zielonka(g).eve_region
    disagree += solve_parity_via_universal(g, graph_of_tree(t)).eve_region != ref
    disagree += solve_parity_via_automaton(g, automaton_from_tree(t)).eve_region != ref
print("disagreements over 200 games:", disagree)
