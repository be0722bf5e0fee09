"""Slow, obviously-correct reference implementations used only by the tests.

None of these reuse the package's algorithms: they work from the plain
definitions (cycles, maps, nodes of trees, runs, strategies).
"""

from itertools import combinations, product


# --------------------------------------------------------------------------
# graphs


def simple_cycles(g):
    """Every vertex-simple cycle, as a list of edge triples, each exactly once.

    A cycle is reported from its smallest vertex (in vertex order) and only
    through larger vertices, so rotations are not repeated.
    """
    order = {v: k for k, v in enumerate(g.vertices)}
    out = {v: [] for v in g.vertices}
    for e in sorted(g.edges, key=lambda e: (order[e[0]], e[1], order[e[2]])):
        out[e[0]].append(e)
    for s in g.vertices:
        stack = [(s, [], {s})]
        while stack:
            v, path, seen = stack.pop()
            for e in out[v]:
                w = e[2]
                if w == s:
                    yield path + [e]
                elif order[w] > order[s] and w not in seen:
                    stack.append((w, path + [e], seen | {w}))


def parity_by_cycles(g):
    return all(max(i for _, i, _ in c) % 2 == 0 for c in simple_cycles(g))


def _reaches(g, src, dst, top):
    seen, todo = {src}, [src]
    while todo:
        v = todo.pop()
        if v == dst:
            return True
        for a, i, b in g.edges:
            if a == v and i <= top and b not in seen:
                seen.add(b)
                todo.append(b)
    return False


def parity_by_reachability(g):
    """Odd cycle iff some odd p-edge (u,p,w) has w reaching u by edges <= p."""
    return not any(i % 2 == 1 and _reaches(g, w, u, i) for u, i, w in g.edges)


def all_homomorphisms(g, h):
    vs = list(g.vertices)
    for image in product(h.vertices, repeat=len(vs)):
        m = dict(zip(vs, image))
        if all((m[a], i, m[b]) in h.edges for a, i, b in g.edges):
            yield m


def has_homomorphism(g, h):
    return next(all_homomorphisms(g, h), None) is not None


# --------------------------------------------------------------------------
# trees


def nodes_at_depth(tree, depth):
    """Left-to-right list of the leaf-sets of the nodes at ``depth`` (root = 0)."""
    groups = {}
    for k, b in enumerate(tree.leaves):
        groups.setdefault(b[:depth], set()).add(k)
    return [groups[p] for p in sorted(groups)]


def graph_edges_of_tree(tree):
    """Edges of the tree's graph from the node-level definition.

    Even priority ``i`` compares the nodes at level ``i`` counted from the
    leaves upward (level 0 = the leaves, level 2 = their parents, ...);
    odd ``i`` is the strict part of ``i - 1``.
    """
    h = len(tree.leaves[0]) if tree.leaves else 0
    n = len(tree.leaves)
    edges = set()
    for i in range(0, tree.d, 2):
        nodes = nodes_at_depth(tree, h - i // 2)
        pos = {leaf: k for k, s in enumerate(nodes) for leaf in s}
        for v in range(n):
            for w in range(n):
                if pos[v] <= pos[w]:
                    edges.add((v, i, w))
    for i in range(1, tree.d, 2):
        for v in range(n):
            for w in range(n):
                if (v, i - 1, w) in edges and (w, i - 1, v) not in edges:
                    edges.add((v, i, w))
    return frozenset(edges)


def canonical_vectors(vectors):
    """Relabel a set of equal-length vectors so each node's children are 0, 1, ..."""
    vectors = sorted(set(vectors))
    h = len(vectors[0])
    out = []
    for v in vectors:
        new = []
        for depth in range(h):
            siblings = sorted({u[depth] for u in vectors if u[:depth] == v[:depth]})
            new.append(siblings.index(v[depth]))
        out.append(tuple(new))
    return tuple(out)


def trees_by_subsets(n, h):
    """All n-leaf trees of height h as canonical vector tuples, via subsets of a grid."""
    grid = list(product(range(n), repeat=h))
    return {canonical_vectors(s) for s in combinations(grid, n)}


def embeds_by_deletion(small, big):
    """Does ``small`` arise from ``big`` by deleting leaves (and emptied nodes)?"""
    want = tuple(small.leaves)
    return any(canonical_vectors(s) == want for s in combinations(big.leaves, len(small.leaves)))


# --------------------------------------------------------------------------
# automata


def run_naive(aut, word):
    current = {aut.initial}
    for a in word:
        current = {r for (q, i, r) in aut.transitions if q in current and i == a}
    return current


def rejected_path_naive(aut, g, max_len):
    """Some path of ``g`` with at most ``max_len`` edges whose word has no run, or None."""
    frontier = [(v, (), ()) for v in g.vertices]
    for _ in range(max_len):
        nxt = []
        for v, word, steps in frontier:
            for a, i, b in g.edges:
                if a != v:
                    continue
                w2 = word + (i,)
                if not run_naive(aut, w2):
                    return steps + ((a, i, b),)
                nxt.append((b, w2, steps + ((a, i, b),)))
        frontier = nxt
    return None


# --------------------------------------------------------------------------
# games


def safety_win_naive(sg):
    """Greatest fixpoint of "Eve can stay": drop Eve positions with no move
    into the set and Adam positions with a move out of it, until stable."""
    win = set(sg.positions)
    changed = True
    while changed:
        changed = False
        for p in list(win):
            nxt = sg.succ[p]
            keep = any(q in win for q in nxt) if p in sg.eve else all(q in win for q in nxt)
            if not keep:
                win.discard(p)
                changed = True
    return win


def _restricted_edges(game, choice):
    return {e for e in game.graph.edges if e[0] not in game.eve} | set(choice.values())


def _good_from(edges, v, even_wins=True):
    """Every cycle reachable from v has the parity the player needs."""
    reach, todo = {v}, [v]
    while todo:
        x = todo.pop()
        for a, _, b in edges:
            if a == x and b not in reach:
                reach.add(b)
                todo.append(b)
    for a, i, b in edges:
        if a in reach and (i % 2 == 1) == even_wins:
            # bad-parity edge: on a cycle whose other edges are all <= i?
            seen, todo = {b}, [b]
            while todo:
                x = todo.pop()
                if x == a:
                    return False
                for c, j, dd in edges:
                    if c == x and j <= i and dd not in seen:
                        seen.add(dd)
                        todo.append(dd)
    return True


def eve_winning_naive(game):
    """Eve's winning region by trying all her positional strategies.

    Positional determinacy makes this exact: Eve wins v iff some positional
    strategy leaves only even-max cycles reachable from v.
    """
    eve = sorted(game.eve, key=game.vertices.index)
    options = [sorted(game.graph.out_edges(v)) for v in eve]
    won = set()
    for pick in product(*options):
        edges = _restricted_edges(game, dict(zip(eve, pick)))
        for v in game.vertices:
            if v not in won and _good_from(edges, v):
                won.add(v)
    return won
