"""
Three objects of the same size
==============================

For small n and d, brute force finds the smallest universal tree, the
smallest separating automaton (deterministic or not) and the smallest
universal graph.  They all have the same size, and the constructions
tree -> automaton -> graph -> tree never change the number of states.
"""

from univparity import theorem1_ledger

print(f"{'n':>2} {'d':>2}  tree  det  nondet  graph  chain")
for n, d in [(1, 2), (2, 2), (3, 2), (1, 4), (2, 4)]:
    led = theorem1_ledger(n, d)
    s = led.sizes
    chain = " -> ".join(f"{k}:{v}" for k, v in led.chain)
    print(f"{n:>2} {d:>2}  {s['universal-tree']:>4}  {s['separating-automaton-deterministic']:>3}  "
          f"{s['separating-automaton-nondeterministic']:>6}  {s['universal-graph']:>5}  {chain}")
