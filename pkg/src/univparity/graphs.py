"""Priority-labelled graphs, the parity test, paths and homomorphisms.

A :class:`PriorityGraph` has ``d`` edge relations ``E_0 .. E_{d-1}``; an edge
is a triple ``(v, i, w)``.  Internally vertices are indexed by their position
in ``vertices`` and each relation is stored as one bitmask of successors per
vertex, which keeps the brute-force verifiers in this package affordable.
"""

from __future__ import annotations

import os
import random
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Optional

from .errors import DEFAULT_BUDGET, BudgetExceeded, IncompatiblePriorities

Vertex = Hashable
Edge = tuple  # (v, i, w)


@dataclass(frozen=True)
class PriorityGraph:
    """Finite graph whose edges carry a priority in ``[0, d-1]``.

    Vertices keep their insertion order; that order is what every
    deterministic choice in the package (enumeration, min/max selection,
    canonical output) falls back on.
    """

    d: int
    vertices: tuple
    edges: frozenset
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        edges = frozenset(tuple(e) for e in self.edges)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"priority count must be a positive integer, got {self.d!r}")
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex ids")
        index = {v: k for k, v in enumerate(vertices)}
        for v, i, w in edges:
            if v not in index or w not in index:
                raise ValueError(f"edge {(v, i, w)!r} has an endpoint outside the vertex set")
            if not (isinstance(i, int) and 0 <= i < self.d):
                raise ValueError(f"edge {(v, i, w)!r} has priority outside [0, {self.d - 1}]")
        self._cache["index"] = index

    @classmethod
    def _trusted(cls, d, vertices, edges):
        # Skips validation; used by enumerators that build well-formed graphs by construction.
        g = object.__new__(cls)
        object.__setattr__(g, "d", d)
        object.__setattr__(g, "vertices", vertices)
        object.__setattr__(g, "edges", edges)
        object.__setattr__(g, "_cache", {})
        return g

    def __len__(self):
        return len(self.vertices)

    @property
    def index(self) -> dict:
        idx = self._cache.get("index")
        if idx is None:
            idx = self._cache["index"] = {v: k for k, v in enumerate(self.vertices)}
        return idx

    @property
    def succ_masks(self) -> list:
        """``succ_masks[i][k]``: bitmask of indices ``j`` with ``(vertices[k], i, vertices[j])``."""
        masks = self._cache.get("succ")
        if masks is None:
            n = len(self.vertices)
            masks = [[0] * n for _ in range(self.d)]
            idx = self.index
            for v, i, w in self.edges:
                masks[i][idx[v]] |= 1 << idx[w]
            self._cache["succ"] = masks
        return masks

    @property
    def pred_masks(self) -> list:
        masks = self._cache.get("pred")
        if masks is None:
            n = len(self.vertices)
            masks = [[0] * n for _ in range(self.d)]
            idx = self.index
            for v, i, w in self.edges:
                masks[i][idx[w]] |= 1 << idx[v]
            self._cache["pred"] = masks
        return masks

    def has_edge(self, v, i, w) -> bool:
        return (v, i, w) in self.edges

    def successors(self, v, i) -> list:
        mask = self.succ_masks[i][self.index[v]]
        return [self.vertices[j] for j in _bits(mask)]

    def out_edges(self, v) -> list:
        """Outgoing edges of ``v`` in (priority, target order) order."""
        k = self.index[v]
        out = []
        for i in range(self.d):
            for j in _bits(self.succ_masks[i][k]):
                out.append((v, i, self.vertices[j]))
        return out

    def sorted_edges(self) -> list:
        idx = self.index
        return sorted(self.edges, key=lambda e: (idx[e[0]], e[1], idx[e[2]]))

    def with_edges(self, edges) -> "PriorityGraph":
        return PriorityGraph(self.d, self.vertices, frozenset(edges))

    def add_edge(self, v, i, w) -> "PriorityGraph":
        return PriorityGraph(self.d, self.vertices, self.edges | {(v, i, w)})

    def lift(self, d: int) -> "PriorityGraph":
        """The same graph viewed over a larger priority range."""
        if d < self.d:
            raise IncompatiblePriorities(f"cannot lower priority count {self.d} to {d}")
        return PriorityGraph(d, self.vertices, self.edges)

    def induced(self, keep) -> "PriorityGraph":
        keep = set(keep)
        vs = tuple(v for v in self.vertices if v in keep)
        es = frozenset(e for e in self.edges if e[0] in keep and e[2] in keep)
        return PriorityGraph(self.d, vs, es)

    def relabel(self, mapping) -> "PriorityGraph":
        vs = tuple(mapping[v] for v in self.vertices)
        es = frozenset((mapping[v], i, mapping[w]) for v, i, w in self.edges)
        return PriorityGraph(self.d, vs, es)


def _bits(mask: int) -> Iterator[int]:
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Path:
    """A finite path: a start vertex followed by chained edge triples."""

    start: Vertex
    steps: tuple = ()

    def __post_init__(self):
        steps = tuple(tuple(s) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        cur = self.start
        for v, _, w in steps:
            if v != cur:
                raise ValueError(f"path steps do not chain at {v!r} (expected {cur!r})")
            cur = w

    @property
    def end(self):
        return self.steps[-1][2] if self.steps else self.start

    @property
    def priorities(self) -> tuple:
        return tuple(i for _, i, _ in self.steps)

    @property
    def is_cycle(self) -> bool:
        return bool(self.steps) and self.end == self.start

    def in_graph(self, graph: PriorityGraph) -> bool:
        if self.start not in graph.index:
            return False
        return all(s in graph.edges for s in self.steps)

    def __len__(self):
        return len(self.steps)


# --------------------------------------------------------------------------
# parity


def strongly_connected_components(n: int, succ: list) -> list:
    """Tarjan's algorithm over ``n`` nodes with successor lists ``succ``.

    Returns ``comp`` with ``comp[k]`` the component id of node ``k``.
    Iterative, so deep graphs do not hit the recursion limit.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            node, pos = work[-1]
            if pos == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack[node] = True
            succs = succ[node]
            if pos < len(succs):
                work[-1] = (node, pos + 1)
                nxt = succs[pos]
                if index[nxt] == -1:
                    work.append((nxt, 0))
                elif on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                while True:
                    x = stack.pop()
                    on_stack[x] = False
                    comp[x] = ncomp
                    if x == node:
                        break
                ncomp += 1
    return comp


def _le_masks(graph: PriorityGraph, p: int) -> list:
    succ = graph.succ_masks
    n = len(graph.vertices)
    out = [0] * n
    for i in range(p + 1):
        row = succ[i]
        for k in range(n):
            out[k] |= row[k]
    return out


def _odd_violation(graph: PriorityGraph):
    """First ``(p, comp, x, y)`` with a priority-p edge x->y inside an SCC of the <=p subgraph."""
    n = len(graph.vertices)
    succ = graph.succ_masks
    for p in range(1, graph.d, 2):
        if not any(succ[p]):
            continue
        le = _le_masks(graph, p)
        comp = strongly_connected_components(n, [list(_bits(m)) for m in le])
        for x in range(n):
            for y in _bits(succ[p][x]):
                if comp[x] == comp[y]:
                    return p, comp, x, y
    return None


def satisfies_parity(graph: PriorityGraph) -> bool:
    """True iff every cycle of ``graph`` has even maximal priority.

    For each odd ``p`` the subgraph of edges with priority ``<= p`` must
    not contain a cycle through a priority-``p`` edge, i.e. no such edge
    lies inside a strongly connected component of that subgraph.
    """
    return _odd_violation(graph) is None


def find_odd_cycle(graph: PriorityGraph) -> Optional[Path]:
    """Witness cycle with odd maximal priority, or ``None`` if parity holds."""
    found = _odd_violation(graph)
    if found is None:
        return None
    p, comp, x, y = found
    le = _le_masks(graph, p)
    # BFS from y back to x inside the component, using edges of priority <= p.
    target_comp = comp[x]
    parent = {y: None}
    queue = [y]
    for node in queue:
        if node == x:
            break
        for nxt in _bits(le[node]):
            if comp[nxt] == target_comp and nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    chain = []
    node = x
    while parent[node] is not None:
        chain.append(node)
        node = parent[node]
    chain.append(y)
    chain.reverse()  # y ... x
    vs = graph.vertices
    succ = graph.succ_masks
    steps = [(vs[x], p, vs[y])]
    for a, b in zip(chain, chain[1:]):
        prio = next(i for i in range(p + 1) if succ[i][a] >> b & 1)
        steps.append((vs[a], prio, vs[b]))
    return Path(vs[x], tuple(steps))


# --------------------------------------------------------------------------
# homomorphisms


def _check_same_d(g: PriorityGraph, h: PriorityGraph):
    if g.d != h.d:
        raise IncompatiblePriorities(f"priority counts differ: {g.d} vs {h.d}")


def is_homomorphism(g: PriorityGraph, h: PriorityGraph, mapping: dict) -> bool:
    """Does ``mapping`` send every edge ``(v, i, w)`` of g to an edge of h?"""
    _check_same_d(g, h)
    missing = [v for v in g.vertices if v not in mapping]
    if missing:
        raise ValueError(f"vertex map is not total: {missing[:3]!r} unmapped")
    hv = h.index
    if any(mapping[v] not in hv for v in g.vertices):
        raise ValueError("vertex map leaves the target vertex set")
    return all((mapping[v], i, mapping[w]) in h.edges for v, i, w in g.edges)


def compose(first: dict, second: dict) -> dict:
    """``second after first`` as a vertex map."""
    return {v: second[u] for v, u in first.items()}


def _target_order(h: PriorityGraph) -> list:
    # Candidates sorted by E_0 in-degree: for a tree-like target this is its E_0 order.
    if h.d == 0:
        return list(range(len(h.vertices)))
    pred0 = h.pred_masks[0]
    return sorted(range(len(h.vertices)), key=lambda k: (popcount(pred0[k]), k))


def find_homomorphism(g: PriorityGraph, h: PriorityGraph) -> Optional[dict]:
    """Some homomorphism ``g -> h`` as a dict, or ``None`` if there is none.

    Backtracking with forward checking over bitmask domains.
    """
    _check_same_d(g, h)
    n, m = len(g.vertices), len(h.vertices)
    if n == 0:
        return {}
    if m == 0:
        return None
    d = g.d
    gs, gp = g.succ_masks, g.pred_masks
    hs, hp = h.succ_masks, h.pred_masks
    full = (1 << m) - 1
    loops = [sum(1 << k for k in range(m) if hs[i][k] >> k & 1) for i in range(d)]
    has_out = [sum(1 << k for k in range(m) if hs[i][k]) for i in range(d)]
    has_in = [sum(1 << k for k in range(m) if hp[i][k]) for i in range(d)]

    domains = []
    for x in range(n):
        mask = full
        for i in range(d):
            if gs[i][x] >> x & 1:
                mask &= loops[i]
            if gs[i][x]:
                mask &= has_out[i]
            if gp[i][x]:
                mask &= has_in[i]
        if not mask:
            return None
        domains.append(mask)

    # neighbours[x]: (i, y, outgoing?) for every edge between x and y != x
    neighbours = [[] for _ in range(n)]
    for i in range(d):
        for x in range(n):
            for y in _bits(gs[i][x]):
                if y != x:
                    neighbours[x].append((i, y, True))
                    neighbours[y].append((i, x, False))

    order = []
    placed = [False] * n
    weight = [0] * n
    for _ in range(n):
        best = max(
            (k for k in range(n) if not placed[k]),
            key=lambda k: (weight[k], -popcount(domains[k]), len(neighbours[k]), -k),
        )
        placed[best] = True
        order.append(best)
        for _, y, _ in neighbours[best]:
            weight[y] += 1

    cand_order = _target_order(h)
    assign = [-1] * n

    def search(depth, doms):
        if depth == n:
            return True
        x = order[depth]
        dom = doms[x]
        for u in cand_order:
            if not dom >> u & 1:
                continue
            new = list(doms)
            ok = True
            for i, y, outgoing in neighbours[x]:
                if assign[y] != -1:
                    continue
                new[y] &= hs[i][u] if outgoing else hp[i][u]
                if not new[y]:
                    ok = False
                    break
            if not ok:
                continue
            assign[x] = u
            if search(depth + 1, new):
                return True
            assign[x] = -1
        return False

    # Edges to already-assigned vertices are enforced by forward checking,
    # so each assignment only needs the domain test above.
    if not search(0, domains):
        return None
    gv, hv = g.vertices, h.vertices
    result = {gv[x]: hv[assign[x]] for x in range(n)}
    assert is_homomorphism(g, h, result)
    return result


# --------------------------------------------------------------------------
# enumeration and random generation


def edge_slots(n: int, d: int) -> list:
    """All possible triples on vertices ``0..n-1``, in enumeration bit order."""
    return [(v, i, w) for v in range(n) for i in range(d) for w in range(n)]


def graph_from_mask(n: int, d: int, mask: int, slots=None) -> PriorityGraph:
    slots = slots or edge_slots(n, d)
    edges = frozenset(slots[b] for b in _bits(mask))
    return PriorityGraph._trusted(d, tuple(range(n)), edges)


def count_graphs(n: int, d: int) -> int:
    return 1 << (d * n * n)


def enumerate_graphs(n: int, d: int, parity_only: bool = False, budget: int = DEFAULT_BUDGET,
                     sample: Optional[int] = None, seed: Optional[int] = None,
                     mask_range: Optional[tuple] = None) -> Iterator[PriorityGraph]:
    """Every labelled graph on vertices ``0..n-1`` with ``d`` priorities.

    Graphs with fewer than ``n`` vertices are not listed separately: padding
    with isolated vertices changes neither parity nor the existence of a
    homomorphism into a nonempty target, so the ``n``-vertex graphs already
    cover them.  With ``sample`` set, yields that many uniformly random
    graphs from ``random.Random(seed)`` instead (with ``parity_only`` the
    sample is drawn by :func:`random_parity_graph`).
    """
    slots = edge_slots(n, d)
    if sample is not None:
        if seed is None:
            raise ValueError("sampling requires an explicit seed")
        rng = random.Random(seed)
        for _ in range(sample):
            if parity_only:
                yield random_parity_graph(n, d, rng, exact=True)
            else:
                yield graph_from_mask(n, d, rng.getrandbits(len(slots)), slots)
        return
    total = count_graphs(n, d)
    lo, hi = mask_range or (0, total)
    if hi - lo > budget:
        raise BudgetExceeded(f"graphs with n={n}, d={d}", hi - lo, budget)
    for mask in range(lo, hi):
        g = graph_from_mask(n, d, mask, slots)
        if parity_only and not satisfies_parity(g):
            continue
        yield g


@lru_cache(maxsize=8)
def parity_masks(n: int, d: int) -> tuple:
    """Masks (in increasing order) of the parity graphs on ``n`` vertices; cached."""
    slots = edge_slots(n, d)
    return tuple(m for m in range(count_graphs(n, d)) if satisfies_parity(graph_from_mask(n, d, m, slots)))


CACHE_LIMIT = 1 << 18


def first_failing_parity_graph(test, n: int, d: int, jobs: int, chunk_worker, payload):
    """``(mask or None, checked)`` for the first parity graph in mask order failing ``test``.

    Small enumerations go through the cached :func:`parity_masks`; larger
    ones, or ``jobs > 1``, stream through ``chunk_worker`` via
    :func:`first_failing_mask`.  Either way the answer is the same.
    """
    total = count_graphs(n, d)
    if jobs <= 1 and total <= CACHE_LIMIT:
        slots = edge_slots(n, d)
        for k, mask in enumerate(parity_masks(n, d)):
            if not test(graph_from_mask(n, d, mask, slots)):
                return mask, k + 1
        return None, len(parity_masks(n, d))
    return first_failing_mask(chunk_worker, payload, total, jobs)


def random_graph(n: int, d: int, rng: random.Random, density: float = 0.3) -> PriorityGraph:
    edges = [s for s in edge_slots(n, d) if rng.random() < density]
    return PriorityGraph(d, tuple(range(n)), frozenset(edges))


def random_parity_graph(n: int, d: int, rng: random.Random, exact: bool = False) -> PriorityGraph:
    """A random parity-satisfying graph on ``n`` (or up to ``n``) vertices.

    Triples are offered in random order and kept while the graph still
    satisfies parity, until a random target edge count is reached.
    """
    k = n if exact else rng.randint(1, n)
    slots = edge_slots(k, d)
    rng.shuffle(slots)
    target = rng.randint(0, max(1, d * k * k // 2))
    g = PriorityGraph(d, tuple(range(k)), frozenset())
    kept = set()
    for s in slots:
        if len(kept) >= target:
            break
        trial = PriorityGraph._trusted(d, g.vertices, frozenset(kept | {s}))
        if satisfies_parity(trial):
            kept.add(s)
    return PriorityGraph(d, g.vertices, frozenset(kept))


def disjoint_union(graphs: Iterable[PriorityGraph]) -> PriorityGraph:
    """Disjoint union; vertex ``v`` of the k-th graph becomes ``(k, v)``."""
    graphs = list(graphs)
    if not graphs:
        raise ValueError("empty union")
    d = max(g.d for g in graphs)
    vs, es = [], set()
    for k, g in enumerate(graphs):
        vs.extend((k, v) for v in g.vertices)
        es.update(((k, v), i, (k, w)) for v, i, w in g.edges)
    return PriorityGraph(d, tuple(vs), frozenset(es))


def weak_components(graph: PriorityGraph) -> list:
    """Vertex sets of the weakly connected components."""
    n = len(graph.vertices)
    adj = [0] * n
    for i in range(graph.d):
        for k in range(n):
            adj[k] |= graph.succ_masks[i][k] | graph.pred_masks[i][k]
    seen = 0
    comps = []
    for k in range(n):
        if seen >> k & 1:
            continue
        comp = 1 << k
        frontier = comp
        while frontier:
            nxt = 0
            for j in _bits(frontier):
                nxt |= adj[j]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        comps.append([graph.vertices[j] for j in _bits(comp)])
    return comps


# --------------------------------------------------------------------------
# parallel fan-out for exhaustive checks


def default_jobs() -> int:
    """Worker count from ``UNIVPARITY_JOBS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("UNIVPARITY_JOBS", "1")))
    except ValueError:
        return 1


def first_failing_mask(worker, payload, total: int, jobs: int):
    """Run ``worker(payload, lo, hi) -> (mask or None, checked)`` over mask chunks.

    Returns ``(smallest failing mask or None, total checked)``.  The answer
    does not depend on ``jobs``: chunks are merged in mask order.
    """
    if jobs <= 1 or total < 4096:
        return worker(payload, 0, total)
    from concurrent.futures import ProcessPoolExecutor

    step = -(-total // (jobs * 4))
    bounds = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(worker, [payload] * len(bounds), *zip(*bounds)))
    checked = 0
    for mask, count in results:
        checked += count
        if mask is not None:
            return mask, checked
    return None, checked
