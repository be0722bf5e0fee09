"""
Ordered trees and their graphs
==============================

A tree of height h has leaves addressed by branch vectors.  Each tree gives
a graph on its leaves with priorities 0 .. 2h-1: an even edge i goes from
v to w when v sits weakly left of w at the level i/2 above the leaves, and
the odd edge i+1 asks for strictly left instead.  Reading the tree back from
that graph gives the same tree.
"""

from univparity import (
    OrderedTree,
    complete_universal_tree,
    embeds,
    graph_of_tree,
    is_tree_like,
    is_universal_tree,
    minimal_universal_tree,
    tree_of_graph,
)
from univparity.io import dumps_graph

t = OrderedTree.from_nested(4, [2, 1])
print("leaves:", t.leaves)
g = graph_of_tree(t)
print(dumps_graph(g))
print("tree-like:", bool(is_tree_like(g)), " round trip:", tree_of_graph(g) == t)

# embedding = deleting leaves; here the small tree fits in the complete one
big = complete_universal_tree(2, 4)
print("embedding of", t.to_nested(), "into", big.to_nested(), "->", embeds(t, big))

# the complete tree embeds everything but is wasteful; a search finds the
# smallest tree that still embeds every 3-leaf tree of height 2
small = minimal_universal_tree(3, 4)
print("complete (3,4) tree has", complete_universal_tree(3, 4).size, "leaves,",
      "the smallest universal one has", small.size, small.to_nested())
print("checked universal:", bool(is_universal_tree(small, 3, 4)))
