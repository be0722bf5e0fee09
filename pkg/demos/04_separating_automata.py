"""
Separating automata
===================

A safety automaton reads priority words and rejects when it gets stuck.
It separates for (n, d) when it accepts every path of every parity graph on
n vertices, while every infinite word it accepts satisfies parity.  The
automaton built on the leaves of a universal tree is one such automaton.
"""

from univparity import (
    accepts_all_paths,
    automaton_from_tree,
    is_separating,
    language_subset_parity,
    minimal_universal_tree,
)
from univparity.automata import SafetyAutomaton
from univparity.io import dumps_automaton, dumps_graph

tree = minimal_universal_tree(2, 4)
aut = automaton_from_tree(tree)
print(dumps_automaton(aut))
print("accepted words satisfy parity:", bool(language_subset_parity(aut)))
rep = is_separating(aut, 2, 4, mode="exhaustive")
print(f"separating: {rep.separating} after {rep.checked} parity graphs")

# remove one transition and the exhaustive check produces a witness
broken = SafetyAutomaton(aut.d, aut.initial, aut.transitions - {(aut.initial, 0, aut.initial)})
bad = is_separating(broken, 2, 4, mode="exhaustive")
print("after deleting a transition:", bad.failure)
print(dumps_graph(bad.graph), "rejected path:", bad.path.steps)
print("replayed:", bad.replay(broken), "/", bool(accepts_all_paths(broken, bad.graph)))
