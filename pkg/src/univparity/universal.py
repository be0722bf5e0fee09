"""Universal graphs and the size-preserving constructions between the three
kinds of object: universal trees, separating automata, universal graphs.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .automata import (
    SafetyAutomaton,
    automaton_from_tree,
    graph_of_automaton,
    is_separating,
    minimal_separating_automaton,
)
from .errors import DEFAULT_BUDGET, BudgetExceeded, IncompatiblePriorities, PreconditionError
from .graphs import (
    PriorityGraph,
    _bits,
    compose,
    count_graphs,
    default_jobs,
    edge_slots,
    find_homomorphism,
    find_odd_cycle,
    first_failing_parity_graph,
    graph_from_mask,
    random_parity_graph,
    satisfies_parity,
)
from .saturation import saturate
from .trees import (
    OrderedTree,
    UniversalityReport,
    embeds,
    enumerate_trees,
    graph_of_tree,
    maximal_parity_graphs,
    minimal_universal_tree,
    tree_and_leaf_map,
)


def _same_size(kind, a, b):
    if a != b:
        raise AssertionError(f"{kind} changed the carrier size: {a} -> {b}")


def is_universal_graph(graph: PriorityGraph, n: int, d: int, mode: str = "exhaustive",
                       seed: Optional[int] = None, count: int = 500,
                       budget: int = DEFAULT_BUDGET, jobs: Optional[int] = None) -> UniversalityReport:
    """Does every parity graph on at most ``n`` vertices map into ``graph``?

    ``mode``: ``exhaustive`` tries every parity graph on n vertices;
    ``trees`` only the saturated ones (``graph_of_tree`` of n-leaf trees),
    which is enough because every parity graph is a subgraph of one of
    them; ``sample`` tries ``count`` random parity graphs (refutation only).
    A graph that fails parity is rejected outright, with its odd cycle as
    the counterexample.  ``jobs`` parallelises exhaustive mode.
    """
    if graph.d != d:
        raise IncompatiblePriorities(f"graph has d={graph.d}, asked about d={d}")
    cycle = find_odd_cycle(graph)
    if cycle is not None:
        return UniversalityReport(False, cycle, 0)
    if mode == "exhaustive":
        total = count_graphs(n, d)
        if total > budget:
            raise BudgetExceeded(f"graphs with n={n}, d={d}", total, budget)
        mask, checked = first_failing_parity_graph(lambda g: find_homomorphism(g, graph) is not None, n, d,
                                                   jobs or default_jobs(), _universal_chunk, (graph, n, d))
        if mask is None:
            return UniversalityReport(True, None, checked)
        return UniversalityReport(False, graph_from_mask(n, d, mask), checked)
    if mode == "trees":
        sources = maximal_parity_graphs(n, d, budget)
    elif mode == "sample":
        if seed is None:
            raise ValueError("sample mode needs a seed")
        rng = random.Random(seed)
        sources = (random_parity_graph(n, d, rng) for _ in range(count))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    checked = 0
    for g in sources:
        checked += 1
        if find_homomorphism(g, graph) is None:
            return UniversalityReport(False, g, checked)
    return UniversalityReport(True, None, checked)


def _universal_chunk(payload, lo, hi):
    target, n, d = payload
    slots = edge_slots(n, d)
    checked = 0
    for mask in range(lo, hi):
        g = graph_from_mask(n, d, mask, slots)
        if not satisfies_parity(g):
            continue
        checked += 1
        if find_homomorphism(g, target) is None:
            return mask, checked
    return None, checked


def universal_tree_from_universal_graph(graph: PriorityGraph) -> OrderedTree:
    """Saturate a universal graph and read off its tree.

    Vertices that end up equivalent under ``E_0`` are split into sibling
    leaves, so the tree has exactly one leaf per vertex of ``graph``.  The
    tree obtained without splitting embeds into it, hence universality
    carries over.
    """
    sat = saturate(graph)
    tree, _ = tree_and_leaf_map(sat, split_ties=True)
    _same_size("universal graph -> universal tree", len(graph), tree.size)
    return tree


def universal_graph_from_automaton(aut: SafetyAutomaton, n: int, d: int, check: bool = True,
                                   order=None) -> PriorityGraph:
    """Saturation of the transition graph of a separating automaton.

    With ``check`` the automaton is verified first (``is_separating`` in its
    default mode) and a :class:`PreconditionError` carrying the report is
    raised if it fails.
    """
    if check:
        report = is_separating(aut, n, d)
        if not report:
            raise PreconditionError(f"automaton is not ({n},{d})-separating: {report.failure}", report)
    g = graph_of_automaton(aut)
    if not satisfies_parity(g):
        raise PreconditionError("transition graph has an odd cycle", find_odd_cycle(g))
    sat = saturate(g, order=order)
    _same_size("separating automaton -> universal graph", len(aut), len(sat))
    return sat


def automaton_homomorphism(aut: SafetyAutomaton, saturated: PriorityGraph, source: PriorityGraph) -> dict:
    """Map a parity graph into the saturated automaton graph.

    Each vertex ``v`` of ``source`` goes to the ``E_0``-largest state among
    those a run can be in after reading some path of ``source`` ending in
    ``v``.  For a nondeterministic automaton only *safe* states count: states
    from which, whatever path of ``source`` is continued from ``v``, some run
    continues too (a greatest fixpoint).  Without that restriction the
    largest state may be a dead end for the next edge and the map is not a
    homomorphism.  The reachable safe sets are a least fixpoint, computed by
    relaxation along edges rather than by enumerating paths.

    When the initial state is not safe at some vertex (the automaton cannot
    resolve its nondeterminism online along ``source``) the map is found by
    backtracking instead.
    """
    if list(saturated.vertices) != list(aut.states):
        raise ValueError("saturated graph must be on the automaton's states")
    n = len(source.vertices)
    allq = (1 << len(aut.states)) - 1
    succ = source.succ_masks
    post = aut.post_masks
    # safe[v]: states q such that every edge (v,i,w) has an i-successor of q in safe[w]
    safe = [allq] * n
    changed = True
    while changed:
        changed = False
        for v in range(n):
            keep = 0
            for q in _bits(safe[v]):
                if all(post[i][q] & safe[w] for i in range(source.d) for w in _bits(succ[i][v])):
                    keep |= 1 << q
            if keep != safe[v]:
                safe[v] = keep
                changed = True
    init = 1 << aut.index[aut.initial]
    if not all(safe[v] & init for v in range(n)):
        mapping = find_homomorphism(source, saturated)
        if mapping is None:
            raise PreconditionError("source graph does not map into the saturated automaton graph")
        return mapping
    reach = [init] * n
    work = list(range(n))
    queued = [True] * n
    while work:
        v = work.pop()
        queued[v] = False
        for i in range(source.d):
            if not succ[i][v]:
                continue
            nxt = aut.post(reach[v], i)
            for w in _bits(succ[i][v]):
                add = nxt & safe[w] & ~reach[w]
                if add:
                    reach[w] |= add
                    if not queued[w]:
                        queued[w] = True
                        work.append(w)
    pred0 = saturated.pred_masks[0]
    states = aut.states
    mapping = {}
    for v in range(n):
        best = max(_bits(reach[v]), key=lambda k: (bin(pred0[k]).count("1"), k))
        mapping[source.vertices[v]] = states[best]
    return mapping


def homomorphism_into_universal(graph: PriorityGraph, tree: OrderedTree) -> dict:
    """Homomorphism from a parity graph into ``graph_of_tree(tree)``.

    Saturate ``graph`` (the identity maps it into its saturation), read the
    saturation as a tree ``t``, embed ``t`` into ``tree``, and compose.
    Requires ``tree`` universal for at least ``len(graph)`` leaves.
    """
    if graph.d > tree.d:
        raise IncompatiblePriorities(f"graph has d={graph.d}, tree has d={tree.d}")
    g = graph.lift(tree.d) if graph.d < tree.d else graph
    cycle = find_odd_cycle(g)
    if cycle is not None:
        raise PreconditionError("graph does not satisfy parity", cycle)
    if not g.vertices:
        return {}
    small, leaf_of = tree_and_leaf_map(saturate(g))
    emb = embeds(small, tree)
    if emb is None:
        raise PreconditionError(f"tree does not embed the {small.size}-leaf saturation; not universal enough",
                                small)
    return compose(leaf_of, emb)


def minimal_universal_graph(n: int, d: int, budget: int = 1 << 17, stats: Optional[dict] = None) -> PriorityGraph:
    """A smallest (n,d)-universal graph, by brute force over vertex counts.

    For each ``k`` the graphs of ``k``-leaf trees are tried first, then every
    graph on ``k`` vertices in mask order.  Candidates must satisfy parity
    and carry a 0-loop somewhere (the single 0-loop vertex has to map in),
    and are screened against the saturated n-vertex graphs, which is
    complete.  The answer is re-checked exhaustively when that fits
    ``budget``.
    """
    targets = list(maximal_parity_graphs(n, d))
    per_size = {}

    def passes(u):
        return satisfies_parity(u) and all(find_homomorphism(t, u) is not None for t in targets)

    k = 1
    while True:
        found = None
        tried = 0
        if d % 2 == 0:
            for t in enumerate_trees(k, d):
                tried += 1
                u = graph_of_tree(t)
                if passes(u):
                    found = u
                    break
        if found is None:
            total = count_graphs(k, d)
            if total > budget:
                if stats is not None:
                    stats.update(per_size=per_size)
                raise BudgetExceeded(f"graphs on {k} vertices, d={d}", total, budget)
            slots = edge_slots(k, d)
            loop0 = [b for b, (v, i, w) in enumerate(slots) if i == 0 and v == w]
            loop_mask = sum(1 << b for b in loop0)
            for mask in range(total):
                if not mask & loop_mask:
                    continue
                tried += 1
                u = graph_from_mask(k, d, mask, slots)
                if passes(u):
                    found = u
                    break
        per_size[k] = tried
        if found is not None:
            if stats is not None:
                stats["per_size"] = per_size
            if count_graphs(n, d) <= budget:
                assert is_universal_graph(found, n, d, mode="exhaustive", budget=budget)
                if stats is not None:
                    stats["confirmed"] = "exhaustive"
            elif stats is not None:
                stats["confirmed"] = "trees"
            return found
        k += 1


@dataclass
class EquivalenceLedger:
    """Minimal sizes of the three objects for one (n,d), with witnesses."""

    n: int
    d: int
    sizes: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    search: dict = field(default_factory=dict)
    chain: list = field(default_factory=list)
    over_budget: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def complete(self) -> bool:
        return not self.over_budget

    @property
    def equal(self) -> Optional[bool]:
        """Whether all recorded sizes agree; ``None`` if a search did not finish."""
        if not self.complete:
            return None
        return len(set(self.sizes.values())) == 1

    def row(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "universal_tree": self.sizes.get("universal-tree"),
            "separating_automaton_det": self.sizes.get("separating-automaton-deterministic"),
            "separating_automaton_nondet": self.sizes.get("separating-automaton-nondeterministic"),
            "universal_graph": self.sizes.get("universal-graph"),
            "equal": self.equal,
            "over_budget": list(self.over_budget),
            "chain": list(self.chain),
        }


def theorem1_ledger(n: int, d: int, budget: int = 1 << 17) -> EquivalenceLedger:
    """Brute-force the three minimal sizes and run the construction chain.

    The chain starts from the minimal universal tree and goes tree ->
    automaton -> universal graph -> tree; each step must keep the size.
    """
    if d % 2:
        raise ValueError("the ledger needs an even d (trees have height d/2)")
    led = EquivalenceLedger(n, d)
    start = time.perf_counter()
    searches = [
        ("universal-tree", lambda st: minimal_universal_tree(n, d, budget=budget, stats=st)),
        ("separating-automaton-deterministic",
         lambda st: minimal_separating_automaton(n, d, "deterministic", budget=budget, stats=st)),
        ("separating-automaton-nondeterministic",
         lambda st: minimal_separating_automaton(n, d, "nondeterministic", budget=budget, stats=st)),
        ("universal-graph", lambda st: minimal_universal_graph(n, d, budget=budget, stats=st)),
    ]
    for name, run in searches:
        st = {}
        try:
            obj = run(st)
        except BudgetExceeded as exc:
            led.over_budget.append(name)
            led.search[name] = dict(st, error=str(exc))
            continue
        led.sizes[name] = len(obj)
        led.witnesses[name] = obj
        led.search[name] = st
    tree = led.witnesses.get("universal-tree")
    if tree is not None:
        aut = automaton_from_tree(tree)
        ug = universal_graph_from_automaton(aut, n, d)
        back = universal_tree_from_universal_graph(ug)
        led.chain = [("tree", tree.size), ("automaton", len(aut)), ("graph", len(ug)), ("tree", back.size)]
        if len({s for _, s in led.chain}) != 1:
            raise AssertionError(f"construction chain changed size: {led.chain}")
    led.seconds = time.perf_counter() - start
    return led
