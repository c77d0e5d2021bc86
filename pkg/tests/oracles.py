"""Independent reference implementations used only by the test-suite.

Forms are compared in the *expanded* picture: a form becomes the full
alternating sum over root and covertex permutations, a dict of canonical
forests.  Raw graph operators below work on single labelled graphs and do not
reuse any coset bookkeeping from the package.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from fractions import Fraction

import networkx as nx

from aromatic.forest import Forest, permute
from aromatic.forms import Form

Graph = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
Expanded = dict[Forest, Fraction]


# ------------------------------------------------------------------ brute-force enumeration


def _nx_graph(kinds, succ, roots) -> nx.DiGraph:
    g = nx.DiGraph()
    rank = {r: i + 1 for i, r in enumerate(roots)}
    for v, k in enumerate(kinds):
        g.add_node(v, tag=(k, rank.get(v, 0)))
    for v, s in enumerate(succ):
        if s != -1:
            g.add_edge(v, s)
    return g


def _same(a: nx.DiGraph, b: nx.DiGraph) -> bool:
    return nx.is_isomorphic(a, b, node_match=lambda x, y: x["tag"] == y["tag"])


def labelled_graphs(n: int, p: int, order: int):
    """Every labelled aromatic forest on nodes ``0..order-1`` (vertex labels fixed up to symmetry)."""
    nodes = range(order)
    for cov in itertools.permutations(nodes, p):
        kinds = [0] * order
        for label, v in enumerate(cov, start=1):
            kinds[v] = label
        for root_nodes in itertools.permutations(nodes, n):
            rest = [v for v in nodes if v not in root_nodes]
            for targets in itertools.product(nodes, repeat=len(rest)):
                succ = [-1] * order
                for v, t in zip(rest, targets):
                    succ[v] = t
                yield tuple(kinds), tuple(succ), tuple(root_nodes)


def brute_force_classes(n: int, p: int, order: int) -> list[tuple[nx.DiGraph, Graph]]:
    """Isomorphism classes of labelled forests, deduplicated by networkx only."""
    buckets: dict[str, list[tuple[nx.DiGraph, Graph]]] = defaultdict(list)
    for graph in labelled_graphs(n, p, order):
        g = _nx_graph(*graph)
        for node, data in g.nodes(data=True):
            data["label"] = repr(data["tag"])
        h = nx.weisfeiler_lehman_graph_hash(g, node_attr="label")
        if not any(_same(g, other) for other, _ in buckets[h]):
            buckets[h].append((g, graph))
    return [item for bucket in buckets.values() for item in bucket]


def isomorphic_graphs(a: Graph, b: Graph) -> bool:
    return _same(_nx_graph(*a), _nx_graph(*b))


# ------------------------------------------------------------------ expanded forms


def _add(acc: Expanded, forest: Forest, c: Fraction) -> None:
    v = acc.get(forest, Fraction(0)) + c
    if v:
        acc[forest] = v
    else:
        acc.pop(forest, None)


def antisymmetrize(raw: Expanded, n: int, p: int) -> Expanded:
    """Average of ``sign(s) * s(x)`` over all root and covertex permutations ``s``."""
    out: Expanded = {}
    norm = Fraction(1, math.factorial(n) * math.factorial(p))
    for forest, c in raw.items():
        for sr in itertools.permutations(range(n)):
            for sc in itertools.permutations(range(p)):
                image, sign = permute(forest, sr, sc)
                _add(out, image, c * sign * norm)
    return out


def expand(form: Form) -> Expanded:
    return antisymmetrize(dict(form.terms), form.n, form.p)


def from_raw(pairs) -> Expanded:
    out: Expanded = {}
    for graph, c in pairs:
        _add(out, Forest.from_graph(*graph), Fraction(c))
    return out


# ------------------------------------------------------------------ raw graph operators


def raw_graft_last_root(graph: Graph):
    """Attach the last root to every node (itself included)."""
    kinds, succ, roots = graph
    r = roots[-1]
    for v in range(len(kinds)):
        s = list(succ)
        s[r] = v
        yield (kinds, tuple(s), roots[:-1])


def raw_mark_vertex(graph: Graph):
    """Turn each vertex into a new covertex with the next label."""
    kinds, succ, roots = graph
    label = max(kinds, default=0) + 1
    for v, k in enumerate(kinds):
        if k == 0:
            new = list(kinds)
            new[v] = label
            yield (tuple(new), succ, roots)


def raw_replace(graph: Graph, c: int, tree: Graph):
    """Replace node ``c`` by the one-root graph ``tree``; predecessors of ``c`` regraft onto ``tree``."""
    kinds, succ, roots = graph
    t_kinds, t_succ, t_roots = tree
    m = len(kinds)
    # new node ids: old nodes keep ids (c becomes unused), tree nodes are shifted by m
    t_root = m + t_roots[0]
    all_kinds = list(kinds) + list(t_kinds)
    base = list(succ) + [-1 if s == -1 else m + s for s in t_succ]
    movers = [u for u in range(m) if succ[u] == c]
    if c in movers:
        movers.remove(c)
        movers.append(t_root)
    elif succ[c] != -1:
        base[t_root] = succ[c]
    new_roots = tuple(t_root if r == c else r for r in roots)
    tree_nodes = range(m, m + len(t_kinds))
    for choice in itertools.product(tree_nodes, repeat=len(movers)):
        s = list(base)
        for u, t in zip(movers, choice):
            s[u] = t
        keep = [v for v in range(len(all_kinds)) if v != c]
        idx = {v: i for i, v in enumerate(keep)}
        yield (tuple(all_kinds[v] for v in keep),
               tuple(-1 if s[v] == -1 else idx[s[v]] for v in keep),
               tuple(idx[r] for r in new_roots))


def raw_graft_tree(tree: Graph, graph: Graph):
    """Attach the root of ``tree`` to each node of ``graph``."""
    kinds, succ, roots = graph
    t_kinds, t_succ, t_roots = tree
    m = len(kinds)
    for v in range(m):
        s = list(succ) + [-1 if x == -1 else m + x for x in t_succ]
        s[m + t_roots[0]] = v
        yield (tuple(kinds) + tuple(t_kinds), tuple(s), roots)


# ------------------------------------------------------------------ operator oracles


def _tau_terms(tau: Form):
    return [(t.graph, c) for t, c in tau.terms.items()]


def oracle_dh(form: Form) -> Expanded:
    pairs = [(g, c) for f, c in expand(form).items() for g in raw_graft_last_root(f.graph)]
    return antisymmetrize(from_raw(pairs), form.n - 1, form.p)


def oracle_dv(form: Form) -> Expanded:
    pairs = [(g, c) for f, c in expand(form).items() for g in raw_mark_vertex(f.graph)]
    return antisymmetrize(from_raw(pairs), form.n, form.p + 1)


def oracle_contract(tau: Form, form: Form) -> Expanded:
    """``p`` times substitution of covertex ``p`` by ``tau`` on the expanded form."""
    p = form.p
    pairs = []
    for f, c in expand(form).items():
        kinds = f.graph[0]
        cov = kinds.index(p)
        for tg, a in _tau_terms(tau):
            for g in raw_replace(f.graph, cov, tg):
                pairs.append((g, p * a * c))
    return antisymmetrize(from_raw(pairs), form.n, p - 1)


def oracle_insertion(tau: Form, form: Form) -> Expanded:
    """``p = 0`` Lie derivative: replace each vertex by ``tau`` in all ways."""
    pairs = []
    for f, c in expand(form).items():
        for v in range(len(f.graph[0])):
            for tg, a in _tau_terms(tau):
                for g in raw_replace(f.graph, v, tg):
                    pairs.append((g, a * c))
    return antisymmetrize(from_raw(pairs), form.n, form.p)


def oracle_graft(tau: Form, form: Form) -> Expanded:
    pairs = []
    for f, c in expand(form).items():
        for tg, a in _tau_terms(tau):
            for g in raw_graft_tree(tg, f.graph):
                pairs.append((g, a * c))
    return antisymmetrize(from_raw(pairs), form.n, form.p)
