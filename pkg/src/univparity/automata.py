"""Safety automata over the priority alphabet and separation checks.

All states accept; a word is rejected exactly when it has no run.  An
automaton is (n,d)-separating when it accepts every path of every parity
(n,d)-graph and accepts no word violating parity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Optional

from .errors import DEFAULT_BUDGET, BudgetExceeded, IncompatiblePriorities, PreconditionError
from .graphs import (
    Path,
    PriorityGraph,
    _bits,
    count_graphs,
    default_jobs,
    edge_slots,
    first_failing_parity_graph,
    graph_from_mask,
    random_parity_graph,
    satisfies_parity,
    strongly_connected_components,
    weak_components,
)
from .trees import OrderedTree, enumerate_trees, graph_of_tree, maximal_parity_graphs

State = Hashable


@dataclass(frozen=True)
class SafetyAutomaton:
    """Nondeterministic safety automaton, trimmed to reachable states.

    ``states`` gives the state order (defaults to first-seen order of a
    breadth-first walk from ``initial``).  Unreachable states and their
    transitions are dropped on construction.
    """

    d: int
    initial: State
    transitions: frozenset
    states: tuple = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        trans = frozenset(tuple(t) for t in self.transitions)
        for q, i, r in trans:
            if not (isinstance(i, int) and 0 <= i < self.d):
                raise ValueError(f"transition {(q, i, r)!r} reads a letter outside [0, {self.d - 1}]")
        out = {}
        for q, i, r in trans:
            out.setdefault(q, []).append(r)
        seen = {self.initial}
        bfs = [self.initial]
        for q in bfs:
            for r in out.get(q, ()):
                if r not in seen:
                    seen.add(r)
                    bfs.append(r)
        if self.states is None:
            states = tuple(bfs)
        else:
            states = tuple(q for q in self.states if q in seen)
            if len(states) != len(seen):
                raise ValueError("state order does not list every reachable state")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", frozenset(t for t in trans if t[0] in seen))

    def __len__(self):
        return len(self.states)

    @property
    def index(self) -> dict:
        idx = self._cache.get("index")
        if idx is None:
            idx = self._cache["index"] = {q: k for k, q in enumerate(self.states)}
        return idx

    @property
    def post_masks(self) -> list:
        """``post_masks[i][k]``: bitmask of successor state indices on letter ``i``."""
        masks = self._cache.get("post")
        if masks is None:
            masks = [[0] * len(self.states) for _ in range(self.d)]
            idx = self.index
            for q, i, r in self.transitions:
                masks[i][idx[q]] |= 1 << idx[r]
            self._cache["post"] = masks
        return masks

    @property
    def deterministic(self) -> bool:
        return all(m & (m - 1) == 0 for row in self.post_masks for m in row)

    def post(self, mask: int, letter: int) -> int:
        row = self.post_masks[letter]
        out = 0
        for k in _bits(mask):
            out |= row[k]
        return out

    def delta(self, state, letter):
        """Deterministic step: the successor state, or ``None`` when undefined."""
        m = self.post_masks[letter][self.index[state]]
        if m & (m - 1):
            raise ValueError(f"state {state!r} has several successors on {letter}")
        return self.states[m.bit_length() - 1] if m else None

    def states_of(self, mask: int) -> frozenset:
        return frozenset(self.states[k] for k in _bits(mask))


def run_word(aut: SafetyAutomaton, word) -> frozenset:
    """States reachable from the initial state on ``word``; empty means rejected."""
    mask = 1 << aut.index[aut.initial]
    for letter in word:
        if not (isinstance(letter, int) and 0 <= letter < aut.d):
            raise ValueError(f"letter {letter!r} outside [0, {aut.d - 1}]")
        mask = aut.post(mask, letter)
        if not mask:
            break
    return aut.states_of(mask)


def automaton_from_tree(tree: OrderedTree) -> SafetyAutomaton:
    """Deterministic automaton on the leaves of ``tree``.

    Start in the leftmost leaf; on letter ``i`` from leaf ``v`` move to the
    leftmost ``w`` with ``(v, i, w)`` in ``graph_of_tree(tree)``.
    """
    g = graph_of_tree(tree)
    trans = set()
    for k in range(tree.size):
        for i in range(tree.d):
            m = g.succ_masks[i][k]
            if m:
                trans.add((k, i, (m & -m).bit_length() - 1))
    aut = SafetyAutomaton(tree.d, 0, frozenset(trans), tuple(range(tree.size)))
    assert len(aut) == tree.size
    return aut


def graph_of_automaton(aut: SafetyAutomaton) -> PriorityGraph:
    """States as vertices, transitions as edges."""
    g = PriorityGraph(aut.d, aut.states, aut.transitions)
    assert len(g) == len(aut)
    return g


# --------------------------------------------------------------------------
# the two halves of separation


@dataclass(frozen=True)
class LassoReport:
    """Falsy when some odd-maximum lasso ``prefix . loop^omega`` is accepted."""

    ok: bool
    prefix: tuple = ()
    loop: tuple = ()

    def __bool__(self):
        return self.ok


def _bfs_word(aut, src_mask, goal, letters):
    """Shortest word over ``letters`` leading from a state in ``src_mask`` to state index ``goal``."""
    parent = {}
    queue = []
    for k in _bits(src_mask):
        parent[k] = None
        queue.append(k)
    post = aut.post_masks
    for k in queue:
        if k == goal:
            break
        for i in letters:
            for r in _bits(post[i][k]):
                if r not in parent:
                    parent[r] = (k, i)
                    queue.append(r)
    if goal not in parent:
        return None
    word = []
    k = goal
    while parent[k] is not None:
        k, i = parent[k]
        word.append(i)
    return tuple(reversed(word))


def language_subset_parity(aut: SafetyAutomaton) -> LassoReport:
    """True iff every accepted infinite word satisfies parity.

    A violating word exists iff, for some odd ``p``, the transitions on
    letters ``<= p`` contain a cycle using letter ``p``.  All states are
    reachable, so such a cycle gives the lasso directly.
    """
    n = len(aut.states)
    post = aut.post_masks
    for p in range(1, aut.d, 2):
        if not any(post[p]):
            continue
        succ = [[] for _ in range(n)]
        for i in range(p + 1):
            for k in range(n):
                succ[k].extend(_bits(post[i][k]))
        comp = strongly_connected_components(n, succ)
        for a in range(n):
            for b in _bits(post[p][a]):
                if comp[a] == comp[b]:
                    prefix = _bfs_word(aut, 1 << aut.index[aut.initial], a, range(aut.d))
                    back = _bfs_word(aut, 1 << b, a, range(p + 1))
                    return LassoReport(False, prefix, (p,) + back)
    return LassoReport(True)


@dataclass(frozen=True)
class PathReport:
    """Falsy when some finite path of the graph has no run; ``path`` is then that path."""

    ok: bool
    path: Optional[Path] = None

    def __bool__(self):
        return self.ok


def accepts_all_paths(aut: SafetyAutomaton, graph: PriorityGraph) -> PathReport:
    """Does every finite path of ``graph`` (from any vertex) have a run?

    Breadth-first search over pairs (vertex, set of live states); a
    deterministic automaton keeps those sets singletons.
    """
    if graph.d > aut.d:
        raise IncompatiblePriorities(f"graph uses {graph.d} priorities, automaton reads {aut.d}")
    n = len(graph.vertices)
    gsucc = graph.succ_masks
    init = 1 << aut.index[aut.initial]
    parent = {}
    queue = []
    for v in range(n):
        parent[(v, init)] = None
        queue.append((v, init))
    for node in queue:
        v, mask = node
        for i in range(graph.d):
            targets = gsucc[i][v]
            if not targets:
                continue
            nxt = aut.post(mask, i)
            for w in _bits(targets):
                if not nxt:
                    return PathReport(False, _trace(graph, parent, node, (v, i, w)))
                key = (w, nxt)
                if key not in parent:
                    parent[key] = (node, i)
                    queue.append(key)
    return PathReport(True)


def _trace(graph, parent, node, last):
    vs = graph.vertices
    steps = [(vs[last[0]], last[1], vs[last[2]])]
    while parent[node] is not None:
        prev, i = parent[node]
        steps.append((vs[prev[0]], i, vs[node[0]]))
        node = prev
    steps.reverse()
    return Path(vs[node[0]], tuple(steps))


# --------------------------------------------------------------------------
# separation


MODES = ("exhaustive", "universal-witness", "sample", "auto")


@dataclass(frozen=True)
class SeparationReport:
    """Verdict of :func:`is_separating`.

    ``failure`` is ``"missed-parity-path"`` (``graph`` + ``path`` witness) or
    ``"accepted-odd-lasso"`` (``prefix`` + ``loop``).  ``complete`` is False
    for sample mode, whose positive verdicts only mean "no counterexample".
    """

    separating: bool
    failure: Optional[str] = None
    graph: Optional[PriorityGraph] = None
    path: Optional[Path] = None
    prefix: tuple = ()
    loop: tuple = ()
    mode: str = "exhaustive"
    checked: int = 0
    complete: bool = True

    def __bool__(self):
        return self.separating

    def replay(self, aut: SafetyAutomaton) -> bool:
        """Re-confirm the witness independently of the search that produced it."""
        if self.separating:
            return True
        if self.failure == "accepted-odd-lasso":
            if not self.loop or max(self.loop) % 2 == 0:
                return False
            # accepted for arbitrarily many loop iterations <=> accepted (finitely branching)
            word = self.prefix + self.loop * (len(aut) + 1)
            return bool(run_word(aut, word))
        return (satisfies_parity(self.graph) and self.path.in_graph(self.graph)
                and not run_word(aut, self.path.priorities))


def witness_graphs(n: int, d: int):
    """Graphs whose paths are exactly the priority words of parity (n,d)-graphs.

    These are the saturated (tree) graphs on n vertices.  Their disjoint
    union is an (n,d)-universal graph in which every component has only n
    vertices, which is what makes checking against it complete as well as
    sound.
    """
    return list(maximal_parity_graphs(n, d))


def is_separating(aut: SafetyAutomaton, n: int, d: int, mode: str = "auto", seed: Optional[int] = None,
                  count: int = 1000, witness: Optional[PriorityGraph] = None,
                  budget: int = DEFAULT_BUDGET, jobs: Optional[int] = None) -> SeparationReport:
    """Check both separation properties of ``aut`` for (n,d).

    Modes:

    ``exhaustive``
        every parity graph on n vertices from :func:`enumerate_graphs`.
    ``universal-witness``
        the saturated n-vertex tree graphs (see :func:`witness_graphs`), or a
        caller-supplied ``witness`` graph.  A supplied witness whose weak
        components exceed n vertices yields a sound but possibly
        over-strict check; ``complete`` reports which case applies.
    ``sample``
        ``count`` random parity graphs from ``seed``; refutation only.
    ``auto``
        exhaustive for ``n <= 2``, universal-witness otherwise.

    ``jobs`` (default ``UNIVPARITY_JOBS``) spreads exhaustive mode over
    worker processes; the verdict and witness do not depend on it.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if aut.d != d:
        raise IncompatiblePriorities(f"automaton reads {aut.d} letters, asked about d={d}")
    if mode == "auto":
        mode = "exhaustive" if n <= 2 else "universal-witness"
    lasso = language_subset_parity(aut)
    if not lasso:
        return SeparationReport(False, "accepted-odd-lasso", prefix=lasso.prefix, loop=lasso.loop, mode=mode)
    complete = True
    if mode == "exhaustive":
        total = count_graphs(n, d)
        if total > budget:
            raise BudgetExceeded(f"graphs with n={n}, d={d}", total, budget)
        mask, checked = first_failing_parity_graph(lambda g: accepts_all_paths(aut, g), n, d, jobs or default_jobs(),
                                                   _separating_chunk, (aut, n, d))
        if mask is None:
            return SeparationReport(True, mode=mode, checked=checked)
        g = graph_from_mask(n, d, mask)
        return SeparationReport(False, "missed-parity-path", graph=g, path=accepts_all_paths(aut, g).path,
                                mode=mode, checked=checked)
    if mode == "universal-witness":
        if witness is None:
            graphs = witness_graphs(n, d)
        else:
            if not satisfies_parity(witness):
                raise PreconditionError("witness graph must satisfy parity")
            graphs = [witness]
            complete = all(len(c) <= n for c in weak_components(witness))
    else:
        if seed is None:
            raise ValueError("sample mode needs a seed")
        rng = random.Random(seed)
        graphs = (random_parity_graph(n, d, rng) for _ in range(count))
        complete = False
    checked = 0
    for g in graphs:
        checked += 1
        rep = accepts_all_paths(aut, g)
        if not rep:
            return SeparationReport(False, "missed-parity-path", graph=g, path=rep.path, mode=mode,
                                    checked=checked, complete=complete)
    return SeparationReport(True, mode=mode, checked=checked, complete=complete)


def _separating_chunk(payload, lo, hi):
    aut, n, d = payload
    slots = edge_slots(n, d)
    checked = 0
    for mask in range(lo, hi):
        g = graph_from_mask(n, d, mask, slots)
        if not satisfies_parity(g):
            continue
        checked += 1
        if not accepts_all_paths(aut, g):
            return mask, checked
    return None, checked


# --------------------------------------------------------------------------
# brute-force minimum


def _candidates(k: int, d: int, cls: str):
    """Transition sets on states ``0..k-1`` (initial 0), in a fixed canonical order."""
    slots = [(q, i) for q in range(k) for i in range(d)]
    if cls == "deterministic":
        for choice in product(range(-1, k), repeat=len(slots)):
            yield frozenset((q, i, r) for (q, i), r in zip(slots, choice) if r >= 0)
    else:
        triples = [(q, i, r) for q in range(k) for i in range(d) for r in range(k)]
        for mask in range(1 << len(triples)):
            yield frozenset(triples[b] for b in _bits(mask))


def count_candidates(k: int, d: int, cls: str) -> int:
    return (k + 1) ** (k * d) if cls == "deterministic" else 1 << (k * d * k)


def minimal_separating_automaton(n: int, d: int, cls: str = "deterministic", budget: int = 1 << 17,
                                 stats: Optional[dict] = None) -> SafetyAutomaton:
    """A smallest (n,d)-separating automaton of class ``cls``.

    ``cls`` is ``"deterministic"`` or ``"nondeterministic"``.  For each
    state count ``k = 1, 2, ...`` the constructive candidates (automata of
    ``k``-leaf trees, when ``d`` is even) are tried first, then every
    transition set on ``k`` states in canonical order, skipping those with
    unreachable states (they were covered at a smaller ``k``).  Candidates
    are screened by the lasso test and the tree-graph witness check; the
    answer is confirmed in exhaustive mode when the graph enumeration fits
    ``budget``.  ``budget`` also caps candidates per state count.  ``stats``
    receives the per-size candidate counts.
    """
    if cls not in ("deterministic", "nondeterministic"):
        raise ValueError(f"unknown automaton class {cls!r}")
    witnesses = witness_graphs(n, d)
    per_size = {}

    def passes(aut):
        if not language_subset_parity(aut):
            return False
        return all(accepts_all_paths(aut, g) for g in witnesses)

    k = 1
    while True:
        tried = 0
        found = None
        if d % 2 == 0:
            for t in enumerate_trees(k, d):
                tried += 1
                aut = automaton_from_tree(t)
                if passes(aut):
                    found = aut
                    break
        if found is None:
            total = count_candidates(k, d, cls)
            if total > budget:
                if stats is not None:
                    stats.update(per_size=per_size)
                raise BudgetExceeded(f"{cls} automata with {k} states, d={d}", total, budget)
            for trans in _candidates(k, d, cls):
                aut = SafetyAutomaton(d, 0, trans, tuple(range(k)))
                if len(aut) != k:
                    continue
                tried += 1
                if passes(aut):
                    found = aut
                    break
        per_size[k] = tried
        if found is not None:
            if stats is not None:
                stats.update(per_size=per_size)
            if count_graphs(n, d) <= budget:
                assert is_separating(found, n, d, mode="exhaustive", budget=budget)
                if stats is not None:
                    stats["confirmed"] = "exhaustive"
            elif stats is not None:
                stats["confirmed"] = "universal-witness"
            return found
        k += 1
