"""
Parity graphs and homomorphisms
===============================

A graph with edges labelled by priorities satisfies parity when the largest
priority on every cycle is even.  Mapping a graph into another one while
keeping labels (a homomorphism) can only help it satisfy parity: the image
of an odd cycle is an odd closed walk.
"""

from univparity import PriorityGraph, find_homomorphism, find_odd_cycle, satisfies_parity

# a 1 followed by a 2 back home: the cycle's maximum is 2, so this is fine
good = PriorityGraph(3, ("a", "b"), frozenset({("a", 1, "b"), ("b", 2, "a")}))
print("good satisfies parity:", bool(satisfies_parity(good)))

# drop the 2 to a 0 and the cycle now peaks at 1
bad = good.with_edges({("a", 1, "b"), ("b", 0, "a")})
cycle = find_odd_cycle(bad)
print("bad has the odd cycle", cycle.steps)

# a single vertex with both a 0-loop and a 2-loop absorbs any graph whose
# edges are all even, and nothing with an odd edge
sink = PriorityGraph(3, ("x",), frozenset({("x", 0, "x"), ("x", 2, "x")}))
even = PriorityGraph(3, (0, 1, 2), frozenset({(0, 2, 1), (1, 0, 2), (2, 0, 0)}))
print("even graph -> sink:", find_homomorphism(even, sink))
print("good graph -> sink:", find_homomorphism(good, sink))
