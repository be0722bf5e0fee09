"""Parity games and three ways to solve them.

Edges carry the priorities (a vertex-priority game becomes one by putting
each vertex's priority on its outgoing edges).  Eve wins a play when the
largest priority seen infinitely often is even.

* :func:`solve_parity_via_universal` plays the safety game ``game x U``
  where Eve must shadow every move by an edge of a universal graph ``U``.
* :func:`solve_parity_via_automaton` plays the safety game against a
  deterministic separating automaton.
* :func:`zielonka` is the classical recursive algorithm, kept as an
  independent oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .automata import SafetyAutomaton
from .errors import IncompatiblePriorities, PreconditionError
from .graphs import PriorityGraph, satisfies_parity

EVE, ADAM = 0, 1
PLAYER_NAMES = ("eve", "adam")


@dataclass(frozen=True)
class ParityGame:
    """A ``PriorityGraph`` plus the set of vertices Eve controls."""

    graph: PriorityGraph
    eve: frozenset

    def __post_init__(self):
        eve = frozenset(self.eve)
        object.__setattr__(self, "eve", eve)
        if not eve <= set(self.graph.vertices):
            raise ValueError("Eve's vertices must belong to the graph")
        stuck = dead_ends(self.graph)
        if stuck:
            raise PreconditionError(f"dead-end vertices: {stuck[:10]!r}", stuck)

    @property
    def d(self) -> int:
        return self.graph.d

    @property
    def vertices(self) -> tuple:
        return self.graph.vertices

    @property
    def adam(self) -> frozenset:
        return frozenset(v for v in self.graph.vertices if v not in self.eve)

    def owner(self, v) -> int:
        return EVE if v in self.eve else ADAM

    def __len__(self):
        return len(self.graph.vertices)


def dead_ends(graph: PriorityGraph) -> list:
    return [v for k, v in enumerate(graph.vertices) if not any(row[k] for row in graph.succ_masks)]


def complete_dead_ends(graph: PriorityGraph, eve) -> PriorityGraph:
    """Give every stuck vertex a self-loop that makes its owner lose.

    A stuck Eve vertex gets a priority-1 loop, a stuck Adam vertex a
    priority-0 loop (lifting ``d`` to 2 if needed).
    """
    stuck = dead_ends(graph)
    if not stuck:
        return graph
    d = max(graph.d, 2)
    extra = {(v, 1 if v in eve else 0, v) for v in stuck}
    return PriorityGraph(d, graph.vertices, graph.edges | extra)


@dataclass(frozen=True, eq=False)
class PositionalStrategy:
    """``choice[v]`` is the edge ``(v, i, w)`` the owner takes at ``v``."""

    owner: int
    choice: dict

    def __eq__(self, other):
        return isinstance(other, PositionalStrategy) and (self.owner, self.choice) == (other.owner, other.choice)


def _check_strategy(game: ParityGame, sigma: PositionalStrategy):
    mine = game.eve if sigma.owner == EVE else game.adam
    if set(sigma.choice) != set(mine):
        raise ValueError("strategy must choose an edge at exactly the owner's vertices")
    for v, e in sigma.choice.items():
        if e[0] != v or e not in game.graph.edges:
            raise ValueError(f"strategy picks {e!r} at {v!r}, which is not an outgoing edge")


def restrict_to_strategy(game: ParityGame, sigma: PositionalStrategy) -> PriorityGraph:
    """The graph ``game[sigma]``: opponent edges kept, owner edges cut down to sigma's."""
    _check_strategy(game, sigma)
    mine = game.eve if sigma.owner == EVE else game.adam
    kept = {e for e in game.graph.edges if e[0] not in mine}
    kept.update(sigma.choice.values())
    return PriorityGraph(game.d, game.vertices, frozenset(kept))


def strategy_is_winning(game: ParityGame, sigma: PositionalStrategy, region) -> bool:
    """Does sigma keep every play from ``region`` inside it and won by its owner?

    Eve's condition is parity of the restricted graph on the region; Adam's
    is the dual (every cycle odd), tested by shifting priorities up by one.
    """
    g = restrict_to_strategy(game, sigma)
    region = set(region)
    for v in region:
        if any(e[2] not in region for e in g.out_edges(v)):
            return False
    sub = g.induced(region)
    if sigma.owner == ADAM:
        sub = PriorityGraph(sub.d + 1, sub.vertices, frozenset((v, i + 1, w) for v, i, w in sub.edges))
    return satisfies_parity(sub)


# --------------------------------------------------------------------------
# safety games


@dataclass(frozen=True)
class SafetyGame:
    """Arena where Eve wins by never getting stuck.

    ``succ`` maps every position to its successors.  A position of Eve's
    without successors is losing for her; one of Adam's is losing for Adam.
    """

    positions: tuple
    eve: frozenset
    succ: dict

    def __len__(self):
        return len(self.positions)

    @property
    def num_moves(self) -> int:
        return sum(len(s) for s in self.succ.values())


@dataclass(frozen=True)
class SafetyResult:
    eve_win: frozenset
    adam_win: frozenset
    strategy: dict  # Eve position in eve_win -> successor inside eve_win


def solve_safety(sg: SafetyGame) -> SafetyResult:
    """Adam's attractor to Eve's dead ends, by a backward work-list."""
    pred = {p: [] for p in sg.positions}
    for p, nxt in sg.succ.items():
        for q in nxt:
            pred[q].append(p)
    remaining = {p: len(sg.succ[p]) for p in sg.positions}
    attr = {p for p in sg.positions if p in sg.eve and not sg.succ[p]}
    queue = list(attr)
    for q in queue:
        for p in pred[q]:
            if p in attr:
                continue
            if p in sg.eve:
                remaining[p] -= 1
                if remaining[p] == 0:
                    attr.add(p)
                    queue.append(p)
            else:
                attr.add(p)
                queue.append(p)
    win = frozenset(p for p in sg.positions if p not in attr)
    strategy = {}
    for p in win:
        if p in sg.eve:
            strategy[p] = next(q for q in sg.succ[p] if q not in attr)
    return SafetyResult(win, frozenset(attr), strategy)


def product_safety_game(game: ParityGame, step, components) -> SafetyGame:
    """Generic product of ``game`` with a second component.

    Positions ``("at", v, c)`` belong to v's owner and offer every game edge;
    picking edge ``e = (v, i, w)`` leads to Eve's position ``("via", e, c)``,
    where she picks a successor component from ``step(c, i)`` and moves to
    ``("at", w, c')``.  No successor means Eve is stuck.
    """
    positions, eve, succ = [], set(), {}
    for v in game.vertices:
        out = game.graph.out_edges(v)
        for c in components:
            at = ("at", v, c)
            positions.append(at)
            if v in game.eve:
                eve.add(at)
            succ[at] = tuple(("via", e, c) for e in out)
            for e in out:
                via = ("via", e, c)
                positions.append(via)
                eve.add(via)
                succ[via] = tuple(("at", e[2], c2) for c2 in step(c, e[1]))
    return SafetyGame(tuple(positions), frozenset(eve), succ)


def product_with_graph(game: ParityGame, graph: PriorityGraph) -> SafetyGame:
    """The safety game ``game x graph``: Eve shadows each move by an equally labelled edge."""
    if game.d > graph.d:
        raise IncompatiblePriorities(f"game uses {game.d} priorities, graph only {graph.d}")
    return product_safety_game(game, graph.successors, graph.vertices)


def product_with_automaton(game: ParityGame, aut: SafetyAutomaton) -> SafetyGame:
    if game.d > aut.d:
        raise IncompatiblePriorities(f"game uses {game.d} priorities, automaton reads {aut.d}")

    def step(q, i):
        r = aut.delta(q, i)
        return () if r is None else (r,)

    return product_safety_game(game, step, aut.states)


# --------------------------------------------------------------------------
# parity solving


@dataclass
class ParityResult:
    winner: dict                      # vertex -> EVE | ADAM
    eve_strategy: Optional[PositionalStrategy] = None
    adam_strategy: Optional[PositionalStrategy] = None
    product_strategy: Optional[dict] = None
    route: str = ""
    info: dict = field(default_factory=dict)

    @property
    def eve_region(self) -> frozenset:
        return frozenset(v for v, p in self.winner.items() if p == EVE)

    @property
    def adam_region(self) -> frozenset:
        return frozenset(v for v, p in self.winner.items() if p == ADAM)


def _first_edges(game: ParityGame, player: int) -> dict:
    mine = game.eve if player == EVE else game.adam
    return {v: game.graph.out_edges(v)[0] for v in game.vertices if v in mine}


def _positional_from_product(game, result: SafetyResult, components, rank, winning) -> PositionalStrategy:
    """Eve plays, at v, what the product strategy plays at (v, best component).

    "Best" is the winning component of largest rank.  For a tree-like
    graph (rank = E_0 position) winning components are closed downwards
    and edges compose with E_0, so this is a winning positional strategy.
    """
    choice = _first_edges(game, EVE)
    for v in game.eve:
        if not winning(v):
            continue
        best = max((c for c in components if ("at", v, c) in result.eve_win), key=rank)
        via = result.strategy[("at", v, best)]
        choice[v] = via[1]
    return PositionalStrategy(EVE, choice)


def solve_parity_via_universal(game: ParityGame, universal: PriorityGraph, verify: bool = False) -> ParityResult:
    """Winners of ``game`` from the safety game against a universal graph.

    Vertex ``v`` is Eve's iff some ``("at", v, u)`` is safe for her.  A
    positional Eve strategy is extracted when ``universal`` is tree-like
    (e.g. ``graph_of_tree`` of a universal tree); otherwise only the
    product strategy (memory = current vertex of ``universal``) is returned.
    ``verify`` checks universality for ``len(game)`` first (tree mode).
    """
    if verify:
        from .universal import is_universal_graph
        rep = is_universal_graph(universal, len(game), universal.d, mode="trees")
        if not rep:
            raise PreconditionError("graph is not universal for this game size", rep)
    sg = product_with_graph(game, universal)
    res = solve_safety(sg)
    winner = {v: EVE if any(("at", v, u) in res.eve_win for u in universal.vertices) else ADAM
              for v in game.vertices}
    out = ParityResult(winner, product_strategy=dict(res.strategy), route="universal",
                       info={"positions": len(sg), "moves": sg.num_moves})
    from .trees import is_tree_like
    if universal.d % 2 == 0 and is_tree_like(universal):
        pred0 = universal.pred_masks[0]
        idx = universal.index
        out.eve_strategy = _positional_from_product(
            game, res, universal.vertices, lambda u: (bin(pred0[idx[u]]).count("1"), idx[u]),
            lambda v: winner[v] == EVE)
    return out


def solve_parity_via_automaton(game: ParityGame, aut: SafetyAutomaton) -> ParityResult:
    """Winners from the safety game against a deterministic separating automaton.

    Vertex ``v`` is Eve's iff ``("at", v, initial)`` is safe.  The
    positional strategy plays as at ``(v, q)`` for the last winning state
    ``q`` in state order; it is kept only if it checks out as winning
    (it always does for automata built from trees, whose state order is the
    leaf order).
    """
    if not aut.deterministic:
        raise PreconditionError("the automaton route needs a deterministic automaton")
    sg = product_with_automaton(game, aut)
    res = solve_safety(sg)
    winner = {v: EVE if ("at", v, aut.initial) in res.eve_win else ADAM for v in game.vertices}
    out = ParityResult(winner, product_strategy=dict(res.strategy), route="automaton",
                       info={"positions": len(sg), "moves": sg.num_moves})
    idx = aut.index
    sigma = _positional_from_product(game, res, aut.states, lambda q: idx[q], lambda v: winner[v] == EVE)
    if strategy_is_winning(game, sigma, out.eve_region):
        out.eve_strategy = sigma
    else:
        out.info["positional"] = "extraction failed; use product_strategy"
    return out


def _attractor(nodes, target, player, owner, succ, pred):
    attr = set(target)
    strat = {}
    remaining = {}
    queue = list(attr)
    for y in queue:
        for x in pred[y]:
            if x not in nodes or x in attr:
                continue
            if owner[x] == player:
                attr.add(x)
                strat[x] = y
                queue.append(x)
            else:
                if x not in remaining:
                    remaining[x] = sum(1 for z in succ[x] if z in nodes)
                remaining[x] -= 1
                if remaining[x] == 0:
                    attr.add(x)
                    queue.append(x)
    return attr, strat


def zielonka(game: ParityGame) -> ParityResult:
    """Recursive attractor decomposition, with positional strategies for both players.

    Runs on the vertex-priority arena obtained by putting a node on every
    edge (carrying the edge's priority, owned by nobody in particular since
    it has one successor) and giving original vertices priority 0.
    """
    vs = game.vertices
    n = len(vs)
    edges = [e for v in vs for e in game.graph.out_edges(v)]
    idx = game.graph.index
    total = n + len(edges)
    prio = [0] * n + [e[1] for e in edges]
    owner = [game.owner(v) for v in vs] + [EVE] * len(edges)
    succ = [[] for _ in range(total)]
    pred = [[] for _ in range(total)]
    for j, (v, i, w) in enumerate(edges):
        node = n + j
        succ[idx[v]].append(node)
        succ[node].append(idx[w])
    for x in range(total):
        for y in succ[x]:
            pred[y].append(x)

    def solve(nodes):
        if not nodes:
            return [set(), set()], [{}, {}]
        p = max(prio[x] for x in nodes)
        a = p % 2
        top = {x for x in nodes if prio[x] == p}
        A, sa = _attractor(nodes, top, a, owner, succ, pred)
        Wp, Sp = solve(nodes - A)
        if not Wp[1 - a]:
            W = [None, None]
            S = [None, None]
            W[a], W[1 - a] = set(nodes), set()
            S[a] = {**Sp[a], **sa}
            for x in top:
                if owner[x] == a:
                    S[a][x] = next(y for y in succ[x] if y in nodes)
            S[1 - a] = {}
            return W, S
        B, sb = _attractor(nodes, Wp[1 - a], 1 - a, owner, succ, pred)
        Wb, Sb = solve(nodes - B)
        W = [None, None]
        S = [None, None]
        W[1 - a] = Wb[1 - a] | B
        S[1 - a] = {**Sb[1 - a], **{x: y for x, y in Sp[1 - a].items() if x in Wp[1 - a]}, **sb}
        W[a] = Wb[a]
        S[a] = Sb[a]
        return W, S

    W, S = solve(set(range(total)))
    winner = {vs[k]: (EVE if k in W[EVE] else ADAM) for k in range(n)}
    strategies = []
    for player in (EVE, ADAM):
        choice = _first_edges(game, player)
        for k in range(n):
            if owner[k] == player and k in W[player]:
                choice[vs[k]] = edges[S[player][k] - n]
        strategies.append(PositionalStrategy(player, choice))
    return ParityResult(winner, strategies[EVE], strategies[ADAM], route="zielonka")


def random_game(n: int, d: int, rng: random.Random, max_out: int = 3, exact: bool = False) -> ParityGame:
    """Random dead-end-free game on up to ``n`` vertices (exactly ``n`` with ``exact``)."""
    k = n if exact else rng.randint(1, n)
    vs = tuple(range(k))
    edges = set()
    for v in vs:
        for _ in range(rng.randint(1, max_out)):
            edges.add((v, rng.randrange(d), rng.randrange(k)))
    eve = frozenset(v for v in vs if rng.random() < 0.5)
    return ParityGame(PriorityGraph(d, vs, frozenset(edges)), eve)
