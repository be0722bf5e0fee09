"""Ordered trees with all leaves at one height, and tree-like graphs.

A tree for ``d`` priorities (``d`` even) has height ``h = d // 2`` and is
stored as the sorted tuple of its leaves' branch vectors: leaf ``k`` is the
sequence of child indices on the way down from the root, topmost first.
Child indices are canonical (``0, 1, ...`` under every node), so two trees
are equal exactly when their leaf tuples are.

Levels are counted bottom-up by priority.  Even priority ``i`` is the level
of nodes at height ``i // 2`` (leaves at level 0); the ancestor of a leaf at
that level is the prefix of length ``h - i // 2`` of its branch vector.  Odd
priority ``i`` sits on the edges just above level ``i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional

from .errors import DEFAULT_BUDGET, BudgetExceeded, IncompatiblePriorities, PreconditionError
from .graphs import PriorityGraph, _bits


def _check_even(d):
    if not isinstance(d, int) or d < 2 or d % 2:
        raise ValueError(f"trees need an even priority count >= 2, got {d!r}")


@dataclass(frozen=True)
class OrderedTree:
    d: int
    leaves: tuple

    def __post_init__(self):
        _check_even(self.d)
        leaves = tuple(tuple(b) for b in self.leaves)
        object.__setattr__(self, "leaves", leaves)
        h = self.d // 2
        if not leaves:
            raise ValueError("a tree has at least one leaf")
        for b in leaves:
            if len(b) != h:
                raise ValueError(f"leaf {b!r} is not at height {h}")
        if any(leaves[0]):
            raise ValueError("first leaf must be the all-zero branch")
        for prev, cur in zip(leaves, leaves[1:]):
            j = next((k for k in range(h) if prev[k] != cur[k]), None)
            if j is None or cur[j] != prev[j] + 1 or any(cur[j + 1:]):
                raise ValueError(f"branch vectors {prev!r}, {cur!r} are not canonical and increasing")

    @classmethod
    def from_vectors(cls, d, vectors) -> "OrderedTree":
        """Tree whose leaves are the given vectors, renumbered canonically."""
        return cls(d, _canonical(sorted(set(tuple(v) for v in vectors))))

    @classmethod
    def from_nested(cls, d, nested) -> "OrderedTree":
        """Build from nested child lists, bottom level given as leaf counts.

        ``d=2``: an int, the number of leaves.  ``d=4``: ``[2, 1]`` is a root
        with two children holding 2 and 1 leaves.  ``d=6``: ``[[2, 1], [1]]``.
        """
        _check_even(d)
        h = d // 2

        def walk(node, depth):
            if depth == h - 1:
                return [(k,) for k in range(node)]
            out = []
            for c, child in enumerate(node):
                out.extend((c,) + rest for rest in walk(child, depth + 1))
            return out

        return cls(d, tuple(walk(nested, 0)))

    @property
    def height(self) -> int:
        return self.d // 2

    @property
    def size(self) -> int:
        return len(self.leaves)

    def __len__(self):
        return len(self.leaves)

    def ancestor(self, leaf: int, level: int) -> tuple:
        """Ancestor of leaf ``leaf`` at even ``level`` (a branch-vector prefix)."""
        return self.leaves[leaf][: self.height - level // 2]

    def to_nested(self):
        h = self.height

        def walk(vecs, depth):
            if depth == h - 1:
                return len(vecs)
            groups = {}
            for v in vecs:
                groups.setdefault(v[depth], []).append(v)
            return [walk(groups[k], depth + 1) for k in sorted(groups)]

        return walk(list(self.leaves), 0)


def _canonical(vectors) -> tuple:
    """Renumber sorted distinct vectors so children are ``0, 1, ...`` under each node."""
    out = []
    prev_raw, prev_new = None, None
    for v in vectors:
        if prev_raw is None:
            new = (0,) * len(v)
        else:
            j = next(k for k in range(len(v)) if v[k] != prev_raw[k])
            new = prev_new[:j] + (prev_new[j] + 1,) + (0,) * (len(v) - j - 1)
        out.append(new)
        prev_raw, prev_new = v, new
    return tuple(out)


# --------------------------------------------------------------------------
# trees <-> tree-like graphs


def graph_of_tree(tree: OrderedTree) -> PriorityGraph:
    """The tree-like graph on the leaves (vertex ``k`` is leaf ``k``).

    Even ``i``: ``(v, i, w)`` iff v's level-i ancestor is left of or equal to
    w's.  Odd ``i``: iff ``(v, i-1, w)`` holds and ``(w, i-1, v)`` does not,
    i.e. v's level-(i-1) ancestor is strictly left of w's.
    """
    h = tree.height
    n = tree.size
    edges = set()
    for i in range(tree.d):
        cut = h - (i - (i % 2)) // 2
        for v in range(n):
            pv = tree.leaves[v][:cut]
            for w in range(n):
                pw = tree.leaves[w][:cut]
                if (pv <= pw) if i % 2 == 0 else (pv < pw):
                    edges.add((v, i, w))
    return PriorityGraph(tree.d, tuple(range(n)), frozenset(edges))


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of :func:`is_tree_like`; falsy when an axiom fails."""

    ok: bool
    axiom: Optional[str] = None
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.ok


AXIOMS = ("composition", "even-total", "even-reflexive", "odd-definition")


def is_tree_like(graph: PriorityGraph) -> AxiomReport:
    """Check the four tree-like axioms, reporting the first one that fails.

    Axioms are tried in the order: composition
    ``(v,i,v'), (v',j,v'') => (v, max(i,j), v'')``; totality and reflexivity
    of even relations; odd ``E_i`` equal to the strict part of ``E_{i-1}``.
    """
    _check_even(graph.d)
    n, d = len(graph.vertices), graph.d
    vs = graph.vertices
    succ = graph.succ_masks
    for i in range(d):
        for j in range(d):
            top = max(i, j)
            for v in range(n):
                for mid in _bits(succ[i][v]):
                    bad = succ[j][mid] & ~succ[top][v]
                    if bad:
                        far = next(_bits(bad))
                        return AxiomReport(False, "composition", ((vs[v], i, vs[mid]), (vs[mid], j, vs[far])))
    for i in range(0, d, 2):
        for v in range(n):
            for w in range(v + 1, n):
                if not (succ[i][v] >> w & 1 or succ[i][w] >> v & 1):
                    return AxiomReport(False, "even-total", (vs[v], i, vs[w]))
    for i in range(0, d, 2):
        for v in range(n):
            if not succ[i][v] >> v & 1:
                return AxiomReport(False, "even-reflexive", (vs[v], i, vs[v]))
    for i in range(1, d, 2):
        for v in range(n):
            for w in range(n):
                strict = bool(succ[i - 1][v] >> w & 1) and not succ[i - 1][w] >> v & 1
                if bool(succ[i][v] >> w & 1) != strict:
                    return AxiomReport(False, "odd-definition", (vs[v], i, vs[w]))
    return AxiomReport(True)


def tree_and_leaf_map(graph: PriorityGraph, split_ties: bool = False):
    """Tree of a tree-like graph, plus the map sending each vertex to its leaf.

    Nodes at even level ``i`` are the classes of the total preorder ``E_i``.
    Distinct vertices equivalent under ``E_0`` share a leaf unless
    ``split_ties`` is set, in which case they become adjacent sibling leaves
    ordered by vertex order (the tree then has exactly one leaf per vertex).
    """
    report = is_tree_like(graph)
    if not report:
        raise PreconditionError(f"graph is not tree-like ({report.axiom} fails at {report.witness!r})", report)
    n, d = len(graph.vertices), graph.d
    pred = graph.pred_masks
    # Down-set size is constant on a preorder class and strictly order-preserving across classes.
    keys = []
    for v in range(n):
        key = tuple(bin(pred[i][v]).count("1") for i in range(d - 2, -1, -2))
        if split_ties:
            key = key[:-1] + ((key[-1], v),)
        keys.append(key)
    distinct = sorted(set(keys))
    canon = _canonical(distinct)
    where = dict(zip(distinct, range(len(distinct))))
    tree = OrderedTree(d, canon)
    leaf_of = {graph.vertices[v]: where[keys[v]] for v in range(n)}
    return tree, leaf_of


def tree_of_graph(graph: PriorityGraph, split_ties: bool = False) -> OrderedTree:
    return tree_and_leaf_map(graph, split_ties)[0]


# --------------------------------------------------------------------------
# embeddings


def _groups(vecs, depth):
    """Split index list (sorted by vector) into consecutive child groups at ``depth``."""
    out = []
    for k, v in vecs:
        if out and out[-1][0] == v[depth]:
            out[-1][1].append((k, v))
        else:
            out.append((v[depth], [(k, v)]))
    return [g for _, g in out]


def embeds(small: OrderedTree, big: OrderedTree) -> Optional[dict]:
    """Order- and level-preserving embedding of ``small`` into ``big``.

    Returns a dict from leaf index of ``small`` to leaf index of ``big``, or
    ``None``.  Children are matched greedily left to right: sending each
    child subtree to the leftmost child of ``big`` that can host it leaves
    the most room for its right siblings, so greedy finds an embedding
    whenever one exists.
    """
    if small.d != big.d:
        raise IncompatiblePriorities(f"trees of different heights ({small.d} vs {big.d})")
    h = small.height

    def embed(sv, bv, depth):
        if depth == h:
            return {sv[0][0]: bv[0][0]}
        bgroups = _groups(bv, depth)
        mapping = {}
        pos = 0
        for sg in _groups(sv, depth):
            while pos < len(bgroups):
                sub = embed(sg, bgroups[pos], depth + 1)
                pos += 1
                if sub is not None:
                    mapping.update(sub)
                    break
            else:
                return None
        return mapping

    return embed(list(enumerate(small.leaves)), list(enumerate(big.leaves)), 0)


# --------------------------------------------------------------------------
# enumeration and universality


@lru_cache(maxsize=None)
def count_trees(n: int, h: int) -> int:
    """Number of ordered trees of height ``h`` with exactly ``n`` leaves."""
    if h == 0:
        return 1 if n == 1 else 0
    # first child takes k leaves, the rest is a forest counted recursively
    return sum(count_trees(k, h - 1) * _count_forest(n - k, h - 1) for k in range(1, n + 1))


@lru_cache(maxsize=None)
def _count_forest(n: int, h: int) -> int:
    if n == 0:
        return 1
    return sum(count_trees(k, h) * _count_forest(n - k, h) for k in range(1, n + 1))


def _compositions(n):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def _tree_vectors(n, h):
    if h == 0:
        if n == 1:
            yield ((),)
        return
    for comp in _compositions(n):
        for subs in product(*(list(_tree_vectors(c, h - 1)) for c in comp)):
            yield tuple((k,) + v for k, sub in enumerate(subs) for v in sub)


def enumerate_trees(n: int, d: int, budget: int = DEFAULT_BUDGET) -> Iterator[OrderedTree]:
    """Every tree with exactly ``n`` leaves at height ``d // 2``, lexicographically."""
    _check_even(d)
    if n < 1:
        raise ValueError("trees have at least one leaf")
    total = count_trees(n, d // 2)
    if total > budget:
        raise BudgetExceeded(f"({n},{d})-trees", total, budget)
    for leaves in sorted(_tree_vectors(n, d // 2)):
        yield OrderedTree(d, leaves)


@dataclass(frozen=True)
class UniversalityReport:
    ok: bool
    counterexample: object = None
    checked: int = 0

    def __bool__(self):
        return self.ok


def is_universal_tree(tree: OrderedTree, n: int, d: int, exact: bool = False,
                      budget: int = DEFAULT_BUDGET) -> UniversalityReport:
    """Does ``tree`` embed every tree with at most ``n`` leaves?

    ``exact=True`` checks only trees with exactly ``n`` leaves.  The two
    readings agree for ``n >= 1`` because every smaller tree embeds into
    some ``n``-leaf tree, but the flag keeps them separable.
    """
    _check_even(d)
    if tree.d != d:
        raise IncompatiblePriorities(f"tree has d={tree.d}, asked about d={d}")
    checked = 0
    for k in ([n] if exact else range(1, n + 1)):
        for t in enumerate_trees(k, d, budget):
            checked += 1
            if embeds(t, tree) is None:
                return UniversalityReport(False, t, checked)
    return UniversalityReport(True, None, checked)


def complete_universal_tree(n: int, d: int, budget: int = DEFAULT_BUDGET) -> OrderedTree:
    """The full ``n``-ary tree of height ``d // 2`` (``n ** (d // 2)`` leaves)."""
    _check_even(d)
    size = n ** (d // 2)
    if size > budget:
        raise BudgetExceeded(f"complete ({n},{d}) tree", size, budget)
    return OrderedTree(d, tuple(product(range(n), repeat=d // 2)))


def minimal_universal_tree(n: int, d: int, budget: int = 1 << 16, stats: Optional[dict] = None) -> OrderedTree:
    """Smallest tree (then lexicographically first) that is (n,d)-universal.

    Sizes below ``n`` are skipped: embedding the flat ``n``-leaf tree already
    forces at least ``n`` leaves.  ``budget`` caps the number of candidate
    trees examined; ``stats`` (if given) receives per-size candidate counts.
    """
    _check_even(d)
    h = d // 2
    examined = 0
    per_size = {}
    size = max(n, 1)
    while True:
        count = count_trees(size, h)
        if examined + count > budget:
            if stats is not None:
                stats.update(per_size=per_size, examined=examined)
            raise BudgetExceeded(
                f"minimal ({n},{d})-universal tree search at size {size} (complete_universal_tree "
                f"gives {n ** h} leaves)", examined + count, budget)
        tried = 0
        for cand in enumerate_trees(size, d, budget):
            tried += 1
            if is_universal_tree(cand, n, d):
                per_size[size] = tried
                if stats is not None:
                    stats.update(per_size=per_size, examined=examined + tried)
                return cand
        per_size[size] = tried
        examined += tried
        size += 1


def maximal_parity_graphs(n: int, d: int, budget: int = DEFAULT_BUDGET) -> Iterator[PriorityGraph]:
    """``graph_of_tree(t)`` for every tree ``t`` with n leaves, as ``d``-priority graphs.

    Every parity graph on at most n vertices maps into one of these (its
    saturation is one of them), so together their paths are exactly the
    priority words of parity (n,d)-graphs.  For odd ``d`` the trees use
    ``d + 1`` priorities and the top relation is dropped.
    """
    de = d if d % 2 == 0 else d + 1
    for t in enumerate_trees(n, de, budget):
        g = graph_of_tree(t)
        if de != d:
            g = PriorityGraph(d, g.vertices, frozenset(e for e in g.edges if e[1] < d))
        yield g
