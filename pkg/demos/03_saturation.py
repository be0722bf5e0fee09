"""
Saturating a parity graph
=========================

Keep adding edges as long as no odd cycle appears.  When nothing more can
be added the graph is tree-like, so it is the graph of an ordered tree, and
the original graph maps into it by the identity.
"""

import random

from univparity import is_homomorphism, is_tree_like, random_parity_graph, saturate, tree_of_graph
from univparity.io import dumps_graph

rng = random.Random(7)
g = random_parity_graph(4, 4, rng)
print("input:")
print(dumps_graph(g))

s = saturate(g)
print(f"saturated: {len(g.edges)} -> {len(s.edges)} edges, tree-like: {bool(is_tree_like(s))}")
print("identity is a homomorphism:", is_homomorphism(g, s, {v: v for v in g.vertices}))
print("its tree:", tree_of_graph(s).to_nested())

# over many random inputs the maximal graph is always tree-like
fails = sum(not is_tree_like(saturate(random_parity_graph(5, 4, rng))) for _ in range(300))
print("failures over 300 random graphs:", fails)
