"""Text, JSON and Graphviz codecs for graphs, trees, automata and games.

Text formats (one record per line, ``#`` starts a comment line)::

    graph <n> <d>             automaton <d> <initial>      game <n> <d>
    vertex <name>   (opt.)    states <q> <q> ...  (opt.)   vertex <name>  (opt.)
    edge <v> <i> <w>          trans <q> <i> <q'>           eve <v> <v> ...
                                                           edge <v> <i> <w>

``vertex`` lines appear only when the vertices are not ``0 .. n-1``;
``states`` only when the state order differs from the default
breadth-first order.  Emitters sort records, so emitted files are
canonical and ``dumps(loads(text)) == text`` for them.

Games are also read and written in the PGSolver format
(``parity <max-id>;`` then ``<id> <priority> <owner> <succ,succ> ["name"];``),
with each vertex's priority placed on its outgoing edges.
"""

from __future__ import annotations

import json
import re

from .automata import SafetyAutomaton
from .errors import ParseError
from .games import PLAYER_NAMES, ParityGame, PositionalStrategy, complete_dead_ends, dead_ends
from .graphs import PriorityGraph
from .trees import OrderedTree

_INT = re.compile(r"-?\d+\Z")


def _token(s):
    return int(s) if _INT.match(s) else s


def _name(v):
    s = str(v)
    if not s or any(c.isspace() for c in s) or s.startswith("#"):
        raise ValueError(f"vertex/state id {v!r} cannot be written as a single token")
    if isinstance(v, str) and _INT.match(v):
        raise ValueError(f"string id {v!r} would be read back as an integer")
    return s


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line.split()


def _int(tok, no, what):
    if not _INT.match(tok):
        raise ParseError(f"{what} must be an integer, got {tok!r}", no)
    return int(tok)


# --------------------------------------------------------------------------
# graphs


def _dump_vertices_edges(g: PriorityGraph, out: list):
    if list(g.vertices) != list(range(len(g.vertices))):
        out.extend(f"vertex {_name(v)}" for v in g.vertices)
    for v, i, w in g.sorted_edges():
        out.append(f"edge {_name(v)} {i} {_name(w)}")


def dumps_graph(g: PriorityGraph) -> str:
    out = [f"graph {len(g.vertices)} {g.d}"]
    _dump_vertices_edges(g, out)
    return "\n".join(out) + "\n"


def _parse_body(text, keyword):
    lines = list(_lines(text))
    if not lines:
        raise ParseError(f"empty input, expected '{keyword} <n> <d>'", 1)
    no, head = lines[0]
    if len(head) != 3 or head[0] != keyword:
        raise ParseError(f"expected header '{keyword} <n> <d>', got {' '.join(head)!r}", no)
    n = _int(head[1], no, "vertex count")
    d = _int(head[2], no, "priority count")
    if d < 1:
        raise ParseError("priority count must be positive", no)
    names, edges, extra = [], [], []
    for no, toks in lines[1:]:
        kind = toks[0]
        if kind == "vertex":
            if len(toks) != 2:
                raise ParseError("expected 'vertex <name>'", no)
            names.append(_token(toks[1]))
        elif kind == "edge":
            if len(toks) != 4:
                raise ParseError("expected 'edge <v> <i> <w>'", no)
            edges.append((no, (_token(toks[1]), _int(toks[2], no, "priority"), _token(toks[3]))))
        else:
            extra.append((no, toks))
    if names and len(names) != n:
        raise ParseError(f"header announces {n} vertices but {len(names)} vertex lines follow", lines[0][0])
    vertices = tuple(names) if names else tuple(range(n))
    vset = set(vertices)
    if len(vset) != len(vertices):
        raise ParseError("duplicate vertex names", lines[0][0])
    for no, (v, i, w) in edges:
        if v not in vset or w not in vset:
            raise ParseError(f"edge endpoint not a vertex: {v!r} -> {w!r}", no)
        if not 0 <= i < d:
            raise ParseError(f"priority {i} outside [0, {d - 1}]", no)
    return d, vertices, frozenset(e for _, e in edges), extra


def loads_graph(text: str) -> PriorityGraph:
    d, vertices, edges, extra = _parse_body(text, "graph")
    if extra:
        no, toks = extra[0]
        raise ParseError(f"unknown record {toks[0]!r}", no)
    return PriorityGraph(d, vertices, edges)


def graph_to_json(g: PriorityGraph) -> dict:
    return {"d": g.d, "vertices": list(g.vertices), "edges": [list(e) for e in g.sorted_edges()]}


def graph_from_json(doc: dict) -> PriorityGraph:
    def fix(v):
        return tuple(fix(x) for x in v) if isinstance(v, list) else v

    return PriorityGraph(doc["d"], tuple(fix(v) for v in doc["vertices"]),
                         frozenset((fix(v), i, fix(w)) for v, i, w in doc["edges"]))


def graph_to_dot(g: PriorityGraph, name="G") -> str:
    out = [f"digraph {name} {{"]
    out.extend(f'  "{v}";' for v in g.vertices)
    for v, i, w in g.sorted_edges():
        style = "" if i % 2 == 0 else ", style=dashed"
        out.append(f'  "{v}" -> "{w}" [label="{i}"{style}];')
    out.append("}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# trees


def tree_to_json(t: OrderedTree) -> dict:
    return {"d": t.d, "leaves": [list(b) for b in t.leaves]}


def tree_from_json(doc: dict) -> OrderedTree:
    return OrderedTree(doc["d"], tuple(tuple(b) for b in doc["leaves"]))


def dumps_tree(t: OrderedTree) -> str:
    return json.dumps(tree_to_json(t), indent=None, separators=(", ", ": ")) + "\n"


def loads_tree(text: str) -> OrderedTree:
    try:
        return tree_from_json(json.loads(text))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"bad tree document: {exc}") from None


def tree_to_dot(t: OrderedTree, name="T") -> str:
    out = [f"digraph {name} {{", '  node [shape=point]; "root";']
    nodes = set()
    for b in t.leaves:
        for k in range(1, len(b) + 1):
            prefix = b[:k]
            if prefix not in nodes:
                nodes.add(prefix)
                parent = "root" if k == 1 else "_".join(map(str, b[: k - 1]))
                out.append(f'  "{parent}" -> "{"_".join(map(str, prefix))}";')
    out.append("}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# automata


def _sort_key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


def _default_order(aut: SafetyAutomaton) -> tuple:
    out = {}
    for q, i, r in aut.transitions:
        out.setdefault(q, []).append((i, _sort_key(r), r))
    seen = {aut.initial}
    order = [aut.initial]
    for q in order:
        for _, _, r in sorted(out.get(q, ()), key=lambda t: t[:2]):
            if r not in seen:
                seen.add(r)
                order.append(r)
    return tuple(order)


def dumps_automaton(aut: SafetyAutomaton) -> str:
    out = [f"automaton {aut.d} {_name(aut.initial)}"]
    if aut.states != _default_order(aut):
        out.append("states " + " ".join(_name(q) for q in aut.states))
    idx = aut.index
    for q, i, r in sorted(aut.transitions, key=lambda t: (idx[t[0]], t[1], idx[t[2]])):
        out.append(f"trans {_name(q)} {i} {_name(r)}")
    return "\n".join(out) + "\n"


def loads_automaton(text: str) -> SafetyAutomaton:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input, expected 'automaton <d> <initial>'", 1)
    no, head = lines[0]
    if len(head) != 3 or head[0] != "automaton":
        raise ParseError(f"expected header 'automaton <d> <initial>', got {' '.join(head)!r}", no)
    d = _int(head[1], no, "alphabet size")
    initial = _token(head[2])
    order = None
    trans = []
    for no, toks in lines[1:]:
        if toks[0] == "states":
            order = tuple(_token(t) for t in toks[1:])
        elif toks[0] == "trans":
            if len(toks) != 4:
                raise ParseError("expected 'trans <q> <i> <q'>'", no)
            i = _int(toks[2], no, "letter")
            if not 0 <= i < d:
                raise ParseError(f"letter {i} outside [0, {d - 1}]", no)
            trans.append((_token(toks[1]), i, _token(toks[3])))
        else:
            raise ParseError(f"unknown record {toks[0]!r}", no)
    aut = SafetyAutomaton(d, initial, frozenset(trans))
    if order is None:
        order = _default_order(aut)
    try:
        return SafetyAutomaton(d, initial, frozenset(trans), order)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def automaton_to_json(aut: SafetyAutomaton) -> dict:
    idx = aut.index
    return {"d": aut.d, "initial": aut.initial, "states": list(aut.states),
            "deterministic": aut.deterministic,
            "transitions": [list(t) for t in sorted(aut.transitions, key=lambda t: (idx[t[0]], t[1], idx[t[2]]))]}


def automaton_from_json(doc: dict) -> SafetyAutomaton:
    return SafetyAutomaton(doc["d"], doc["initial"], frozenset(tuple(t) for t in doc["transitions"]),
                           tuple(doc["states"]))


# --------------------------------------------------------------------------
# games


def dumps_game(game: ParityGame) -> str:
    g = game.graph
    out = [f"game {len(g.vertices)} {g.d}"]
    if list(g.vertices) != list(range(len(g.vertices))):
        out.extend(f"vertex {_name(v)}" for v in g.vertices)
    out.append(" ".join(["eve"] + [_name(v) for v in g.vertices if v in game.eve]))
    for v, i, w in g.sorted_edges():
        out.append(f"edge {_name(v)} {i} {_name(w)}")
    return "\n".join(out) + "\n"


def loads_game(text: str, complete: bool = False) -> ParityGame:
    d, vertices, edges, extra = _parse_body(text, "game")
    eve = set()
    for no, toks in extra:
        if toks[0] != "eve":
            raise ParseError(f"unknown record {toks[0]!r}", no)
        for t in toks[1:]:
            v = _token(t)
            if v not in vertices:
                raise ParseError(f"eve vertex {v!r} not declared", no)
            eve.add(v)
    return _make_game(PriorityGraph(d, vertices, edges), eve, complete)


def _make_game(graph, eve, complete):
    stuck = dead_ends(graph)
    if stuck and not complete:
        raise ParseError(f"dead-end vertices {stuck[:10]!r} (use dead-end completion to make them losing "
                         f"for their owner)")
    return ParityGame(complete_dead_ends(graph, eve), frozenset(eve))


def loads_pgsolver(text: str, complete: bool = False) -> ParityGame:
    """Parse the PGSolver text format; priorities go on each vertex's outgoing edges."""
    header_seen = False
    max_id = None
    prio, owner, succs, lines_of = {}, {}, {}, {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not line.endswith(";"):
            raise ParseError("statement must end with ';'", no)
        body = line[:-1].strip()
        name_match = re.search(r'"[^"]*"\s*\Z', body)
        if name_match:
            body = body[: name_match.start()].strip()
        toks = body.split()
        if not header_seen:
            if len(toks) != 2 or toks[0] != "parity":
                raise ParseError(f"expected header 'parity <max-id>;', got {line!r}", no)
            max_id = _int(toks[1], no, "max id")
            header_seen = True
            continue
        if toks and toks[0] == "start":
            continue
        if len(toks) != 4:
            raise ParseError("expected '<id> <priority> <owner> <successors>'", no)
        v = _int(toks[0], no, "vertex id")
        p = _int(toks[1], no, "priority")
        o = _int(toks[2], no, "owner")
        if v in prio:
            raise ParseError(f"vertex {v} defined twice", no)
        if not 0 <= v <= max_id:
            raise ParseError(f"vertex id {v} outside [0, {max_id}]", no)
        if p < 0:
            raise ParseError("priorities must be non-negative", no)
        if o not in (0, 1):
            raise ParseError(f"owner must be 0 or 1, got {o}", no)
        prio[v], owner[v], lines_of[v] = p, o, no
        succs[v] = [_int(s, no, "successor") for s in toks[3].split(",") if s]
    if not header_seen:
        raise ParseError("missing 'parity <max-id>;' header", 1)
    for v, ss in succs.items():
        for w in ss:
            if w not in prio:
                raise ParseError(f"successor {w} of vertex {v} is not defined", lines_of[v])
    vertices = tuple(sorted(prio))
    d = max(prio.values(), default=0) + 1
    edges = frozenset((v, prio[v], w) for v in vertices for w in succs[v])
    eve = {v for v in vertices if owner[v] == 0}
    return _make_game(PriorityGraph(d, vertices, edges), eve, complete)


def dumps_pgsolver(game: ParityGame) -> str:
    g = game.graph
    if not all(isinstance(v, int) and v >= 0 for v in g.vertices):
        raise ValueError("PGSolver output needs non-negative integer vertex ids")
    out = [f"parity {max(g.vertices)};"]
    for v in sorted(g.vertices):
        es = g.out_edges(v)
        ps = {i for _, i, _ in es}
        if len(ps) != 1:
            raise ValueError(f"vertex {v} has outgoing priorities {sorted(ps)}; PGSolver needs one per vertex")
        succ = sorted({w for _, _, w in es})
        out.append(f"{v} {ps.pop()} {game.owner(v)} {','.join(map(str, succ))};")
    return "\n".join(out) + "\n"


def loads_any_game(text: str, complete: bool = False) -> ParityGame:
    no, first = next(_lines(text), (1, [""]))
    if first[0] == "game":
        return loads_game(text, complete)
    if first[0] == "parity":
        return loads_pgsolver(text, complete)
    raise ParseError(f"expected header 'game <n> <d>' or 'parity <max-id>;', got {' '.join(first)!r}", no)


def dumps_winners(winner: dict, order) -> str:
    return "".join(f"{_name(v)} {PLAYER_NAMES[winner[v]]}\n" for v in order)


def dumps_strategy(sigma: PositionalStrategy, order) -> str:
    return "".join(f"{_name(v)} {sigma.choice[v][1]} {_name(sigma.choice[v][2])}\n"
                   for v in order if v in sigma.choice)
