"""Saturation: add edges to a parity graph until no more can be added.

A maximal parity-satisfying graph is tree-like, so ``saturate`` is how an
arbitrary parity graph gets turned into a tree it maps into (via the
identity, since the saturation is a super graph).
"""

from __future__ import annotations

from typing import Iterable, Optional

from .errors import PreconditionError
from .graphs import PriorityGraph, _bits, find_odd_cycle, satisfies_parity


def default_order(graph: PriorityGraph) -> list:
    """Candidate triples: priority descending, then source, then target, by vertex order."""
    vs = graph.vertices
    return [(v, i, w) for i in range(graph.d - 1, -1, -1) for v in vs for w in vs]


class _Incremental:
    """Per-priority adjacency masks that answer "would this edge close an odd cycle?"."""

    def __init__(self, graph: PriorityGraph):
        self.d = graph.d
        self.n = len(graph.vertices)
        self.succ = [list(row) for row in graph.succ_masks]
        self.pred = [list(row) for row in graph.pred_masks]

    def _reach(self, start, p, table):
        rows = table[: p + 1]
        seen = 1 << start
        frontier = seen
        while frontier:
            nxt = 0
            for k in _bits(frontier):
                for row in rows:
                    nxt |= row[k]
            frontier = nxt & ~seen
            seen |= nxt
        return seen

    def closes_odd_cycle(self, x, i, y) -> bool:
        # A new odd cycle runs through the new edge and has some odd maximum p >= i.
        for p in range(i if i % 2 else i + 1, self.d, 2):
            fwd = self._reach(y, p, self.succ)      # reachable from y
            if p == i:
                if fwd >> x & 1:
                    return True
                continue
            back = self._reach(x, p, self.pred)     # can reach x
            for a in _bits(fwd):
                if self.succ[p][a] & back:
                    return True
        return False

    def add(self, x, i, y):
        self.succ[i][x] |= 1 << y
        self.pred[i][y] |= 1 << x


def saturate(graph: PriorityGraph, order: Optional[Iterable] = None, debug: bool = False) -> PriorityGraph:
    """A maximal parity-satisfying super graph of ``graph``.

    Triples are offered once each in ``order`` (default
    :func:`default_order`).  One pass is enough: a triple that would close an
    odd cycle still does after further edges are added.  ``debug`` re-runs
    the global parity test after every step and cross-checks each decision.
    """
    if graph.d % 2:
        raise ValueError(f"saturation needs an even priority count, got {graph.d}")
    witness = find_odd_cycle(graph)
    if witness is not None:
        raise PreconditionError("cannot saturate a graph with an odd cycle", witness)
    idx = graph.index
    inc = _Incremental(graph)
    edges = set(graph.edges)
    for v, i, w in (default_order(graph) if order is None else order):
        if (v, i, w) in edges:
            continue
        x, y = idx[v], idx[w]
        bad = inc.closes_odd_cycle(x, i, y)
        if debug:
            trial = PriorityGraph(graph.d, graph.vertices, frozenset(edges | {(v, i, w)}))
            assert bad == (not satisfies_parity(trial)), (v, i, w)
        if not bad:
            inc.add(x, i, y)
            edges.add((v, i, w))
            if debug:
                assert satisfies_parity(PriorityGraph(graph.d, graph.vertices, frozenset(edges)))
    return PriorityGraph(graph.d, graph.vertices, frozenset(edges))


def is_maximal(graph: PriorityGraph) -> bool:
    """True iff adding any absent triple breaks parity (checked globally)."""
    if not satisfies_parity(graph):
        raise PreconditionError("is_maximal expects a parity-satisfying graph", find_odd_cycle(graph))
    for e in default_order(graph):
        if e not in graph.edges and satisfies_parity(graph.add_edge(*e)):
            return False
    return True
