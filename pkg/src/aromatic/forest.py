"""Aromatic forests: canonical keys, graph views, permutations and enumeration.

A forest is stored by its canonical key, a nested tuple built from the
functional-graph structure:

* a node key is ``(kind, children)`` where ``kind`` is 0 for a vertex and
  ``k`` for covertex number ``k``; ``children`` is the sorted tuple of the
  keys of its predecessors (cycle predecessors excluded);
* an aroma key is the lexicographically minimal rotation of the node keys
  along its cycle, read in the direction of the edges;
* a forest key is ``(sorted aroma keys, root tree keys in root order)``.

Two labelled graphs are isomorphic (fixing root numbers and covertex labels)
iff their keys are equal.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

VERTEX = 0
DEFAULT_MAX_ORDER = 7


class ForestError(ValueError):
    """Raised for graphs violating the one-outgoing-edge rule or label rules."""


class CapacityError(ValueError):
    """Raised when a requested order exceeds the configured bound."""


def max_order() -> int:
    return int(os.environ.get("AROMATIC_MAX_ORDER", DEFAULT_MAX_ORDER))


def check_capacity(order: int) -> None:
    bound = max_order()
    if order > bound:
        raise CapacityError(f"order {order} exceeds capacity bound {bound} (set AROMATIC_MAX_ORDER)")


def _min_rotation(seq: tuple) -> tuple:
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


def canonical_key(kinds: Sequence[int], succ: Sequence[int], roots: Sequence[int]) -> tuple:
    """Canonical key of a labelled forest given as successor array.

    ``succ[v]`` is the successor of node ``v`` or -1 for a root; ``roots``
    lists the roots in their numbering order.
    """
    size = len(kinds)
    if len(succ) != size:
        raise ForestError("kinds and successor arrays differ in length")
    root_set = {v for v in range(size) if succ[v] == -1}
    if len(roots) != len(root_set) or set(roots) != root_set:
        raise ForestError("roots must be exactly the nodes without successor")
    for v, s in enumerate(succ):
        if s != -1 and not 0 <= s < size:
            raise ForestError(f"node {v} has invalid successor {s}")
    labels = sorted(k for k in kinds if k != VERTEX)
    if labels != list(range(1, len(labels) + 1)):
        raise ForestError(f"covertex labels must be 1..p each used once, got {labels}")

    # nodes on cycles: walk each node until a root or an already classified node
    state = [0] * size  # 0 unseen, 1 on current path, 2 done
    on_cycle = [False] * size
    for start in range(size):
        path = []
        v = start
        while v != -1 and state[v] == 0:
            state[v] = 1
            path.append(v)
            v = succ[v]
        if v != -1 and state[v] == 1:
            w = v
            while True:
                on_cycle[w] = True
                w = succ[w]
                if w == v:
                    break
        for w in path:
            state[w] = 2

    children: list[list[int]] = [[] for _ in range(size)]
    for v, s in enumerate(succ):
        if s != -1 and not on_cycle[v]:
            children[s].append(v)

    memo: dict[int, tuple] = {}

    def node_key(v: int) -> tuple:
        key = memo.get(v)
        if key is None:
            key = (kinds[v], tuple(sorted(node_key(c) for c in children[v])))
            memo[v] = key
        return key

    aromas = []
    seen = [False] * size
    for v in range(size):
        if on_cycle[v] and not seen[v]:
            cycle = []
            w = v
            while not seen[w]:
                seen[w] = True
                cycle.append(node_key(w))
                w = succ[w]
            aromas.append(_min_rotation(tuple(cycle)))
    return (tuple(sorted(aromas)), tuple(node_key(r) for r in roots))


def _emit(node: tuple, kinds: list[int], succ: list[int], parent: int) -> int:
    v = len(kinds)
    kinds.append(node[0])
    succ.append(parent)
    for child in node[1]:
        _emit(child, kinds, succ, v)
    return v


@lru_cache(maxsize=None)
def _node_stats(node: tuple) -> tuple[int, int]:
    """(node count, covertex count) of a node key's subtree."""
    count, cov = 1, int(node[0] != VERTEX)
    for child in node[1]:
        c, k = _node_stats(child)
        count += c
        cov += k
    return count, cov


@dataclass(frozen=True, order=True)
class Forest:
    """Canonical aromatic forest, compared and hashed by its key."""

    key: tuple

    @classmethod
    def from_graph(cls, kinds: Sequence[int], succ: Sequence[int], roots: Sequence[int]) -> Forest:
        return cls(canonical_key(kinds, succ, roots))

    @cached_property
    def graph(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """Canonical labelled representative as ``(kinds, succ, roots)``."""
        kinds: list[int] = []
        succ: list[int] = []
        aromas, trees = self.key
        for aroma in aromas:
            cycle = [_emit(node, kinds, succ, -2) for node in aroma]
            for i, v in enumerate(cycle):
                succ[v] = cycle[(i + 1) % len(cycle)]
        roots = tuple(_emit(node, kinds, succ, -1) for node in trees)
        return tuple(kinds), tuple(succ), roots

    @cached_property
    def _stats(self) -> tuple[int, int]:
        nodes = [node for aroma in self.key[0] for node in aroma] + list(self.key[1])
        count = cov = 0
        for node in nodes:
            c, k = _node_stats(node)
            count += c
            cov += k
        return count, cov

    @property
    def n(self) -> int:
        return len(self.key[1])

    @property
    def p(self) -> int:
        return self._stats[1]

    @property
    def order(self) -> int:
        return self._stats[0]

    @property
    def grade(self) -> tuple[int, int, int]:
        return (self.n, self.p, self.order)

    def has_self_loop(self) -> bool:
        return any(len(aroma) == 1 for aroma in self.key[0])

    def __repr__(self) -> str:
        from .textio import print_forest

        return f"Forest({print_forest(self)!r})"


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def _relabel_node(node: tuple, labels: Sequence[int]) -> tuple:
    kind = node[0] if node[0] == VERTEX else labels[node[0] - 1]
    return (kind, tuple(sorted(_relabel_node(c, labels) for c in node[1])))


def permute(forest: Forest, sigma_roots: Sequence[int], sigma_cov: Sequence[int]) -> tuple[Forest, int]:
    """Relabel roots and covertices; returns the canonical result and the sign.

    Permutations are 0-based image tuples: root number ``i+1`` becomes root
    number ``sigma_roots[i]+1`` and covertex ``k+1`` becomes ``sigma_cov[k]+1``.
    """
    n, p = forest.n, forest.p
    if sorted(sigma_roots) != list(range(n)) or sorted(sigma_cov) != list(range(p)):
        raise ForestError(f"permutation sizes must be {n} (roots) and {p} (covertices)")
    aromas, trees = forest.key
    new_trees: list = [None] * n
    for i, tree in enumerate(trees):
        new_trees[sigma_roots[i]] = tree
    if p and list(sigma_cov) != list(range(p)):
        labels = [s + 1 for s in sigma_cov]
        aromas = tuple(sorted(_min_rotation(tuple(_relabel_node(x, labels) for x in a)) for a in aromas))
        new_trees = [_relabel_node(t, labels) for t in new_trees]
    result = Forest((aromas, tuple(new_trees)))
    return result, permutation_sign(sigma_roots) * permutation_sign(sigma_cov)


# ---------------------------------------------------------------- enumeration


@lru_cache(maxsize=None)
def rooted_shapes(size: int) -> tuple[tuple, ...]:
    """All unlabelled rooted trees (vertex-only node keys) with ``size`` nodes."""
    if size < 1:
        return ()
    return tuple(sorted((VERTEX, kids) for kids in _shape_multisets(size - 1)))


@lru_cache(maxsize=None)
def _all_shapes_upto(size: int) -> tuple[tuple, ...]:
    return tuple(s for m in range(1, size + 1) for s in rooted_shapes(m))


def _shape_multisets(total: int) -> list[tuple]:
    """Sorted tuples of rooted shapes whose sizes add up to ``total``."""
    shapes = _all_shapes_upto(total)
    out: list[tuple] = []

    def rec(remaining: int, start: int, acc: list) -> None:
        if remaining == 0:
            out.append(tuple(sorted(acc)))
            return
        for i in range(start, len(shapes)):
            s = shapes[i]
            size = _node_stats(s)[0]
            if size <= remaining:
                acc.append(s)
                rec(remaining - size, i, acc)
                acc.pop()

    rec(total, 0, [])
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def aroma_shapes(size: int) -> tuple[tuple, ...]:
    """All unlabelled aromas with ``size`` nodes, as canonical aroma keys."""
    found = set()
    for length in range(1, size + 1):
        for parts in _compositions(size, length):
            options = [[(VERTEX, kids) for kids in _shape_multisets(m - 1)] for m in parts]
            for cycle in itertools.product(*options):
                found.add(_min_rotation(tuple(cycle)))
    return tuple(sorted(found))


def _aroma_multisets(total: int) -> list[tuple]:
    pool = [a for m in range(1, total + 1) for a in aroma_shapes(m)]
    sizes = [sum(_node_stats(x)[0] for x in a) for a in pool]
    out: list[tuple] = []

    def rec(remaining: int, start: int, acc: list) -> None:
        if remaining == 0:
            out.append(tuple(sorted(acc)))
            return
        for i in range(start, len(pool)):
            if sizes[i] <= remaining:
                acc.append(pool[i])
                rec(remaining - sizes[i], i, acc)
                acc.pop()

    rec(total, 0, [])
    return out


@lru_cache(maxsize=None)
def _vertex_forests(n: int, order: int) -> tuple[Forest, ...]:
    out = []
    for tree_total in range(n, order + 1):
        tree_choices = []
        for sizes in (_compositions(tree_total, n) if n else [()]):
            tree_choices.extend(itertools.product(*(rooted_shapes(s) for s in sizes)))
        if n == 0 and tree_total != 0:
            continue
        for aromas in _aroma_multisets(order - tree_total):
            for trees in tree_choices:
                out.append(Forest((aromas, tuple(trees))))
    return tuple(out)


@lru_cache(maxsize=None)
def _enumerate(n: int, p: int, order: int) -> tuple[Forest, ...]:
    found = set()
    for shape in _vertex_forests(n, order):
        if p == 0:
            found.add(shape)
            continue
        kinds, succ, roots = shape.graph
        for nodes in itertools.permutations(range(order), p):
            labelled = list(kinds)
            for label, v in enumerate(nodes, start=1):
                labelled[v] = label
            found.add(Forest.from_graph(labelled, succ, roots))
    return tuple(sorted(found))


def enumerate_forests(n: int, p: int, order: int) -> tuple[Forest, ...]:
    """All canonical forests with ``n`` roots, ``p`` covertices and ``order`` nodes."""
    if min(n, p, order) < 0:
        raise ValueError("grade entries must be nonnegative")
    check_capacity(order)
    if order == 0:
        return (Forest(((), ())),) if n == 0 and p == 0 else ()
    if n > order or p > order:
        return ()
    return _enumerate(n, p, order)
