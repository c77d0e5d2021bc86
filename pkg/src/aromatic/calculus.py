"""Operators of the aromatic bicomplex.

Every operator is defined on raw forests and extended to forms through the
alternating expansion of a basis element ``wedge(rep)``.  Operators that
single out the last root (``d_h``) or the last covertex (``contract``,
``interior_euler``) are applied to that expansion coset by coset: the
alternating sum over roots equals ``1/n * sum_i (-1)**(n-i)`` of the sums
where root ``i`` has been moved to the last position, and likewise for
covertices.  Per-representative results are memoized on canonical keys.
"""
from __future__ import annotations

import itertools
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .forest import VERTEX, Forest
from .forms import Form, GradeError, wedge

Terms = tuple[tuple[Forest, Fraction], ...]


class OperatorTag(Enum):
    DH = "dh"
    DV = "dv"
    DTOTAL = "d"
    WEDGE = "wedge"
    INTERIOR_EULER = "I"
    DELTA_V = "deltaV"

    def target(self, n: int, p: int) -> tuple[int, int]:
        if self is OperatorTag.DH:
            return (n - 1, p)
        if self in (OperatorTag.DV, OperatorTag.DELTA_V):
            return (n, p + 1)
        return (n, p)


def _collect(raw: Iterable[tuple[tuple, Fraction]], n: int, p: int) -> Terms:
    """Canonicalize raw ``((kinds, succ, roots), coeff)`` pairs and wedge them."""
    pairs = [(Forest.from_graph(*g), c) for g, c in raw]
    return tuple(wedge(pairs, n, p).terms.items())


def _apply(form: Form, per_rep, n: int, p: int) -> Form:
    acc: dict[Forest, Fraction] = {}
    for rep, c in form.terms.items():
        for f, a in per_rep(rep):
            acc[f] = acc.get(f, 0) + c * a
    return Form(n, p, acc)


def _move_covertex_last(kinds: tuple[int, ...], j: int, p: int) -> list[int]:
    """Relabel covertex ``j`` as ``p`` and shift ``j+1..p`` down by one."""
    out = []
    for k in kinds:
        if k == VERTEX or k < j:
            out.append(k)
        elif k == j:
            out.append(p)
        else:
            out.append(k - 1)
    return out


# ------------------------------------------------------------------ d_H, d_V


@lru_cache(maxsize=None)
def _dh_rep(rep: Forest) -> Terms:
    kinds, succ, roots = rep.graph
    n = len(roots)
    raw = []
    for i, r in enumerate(roots):
        coeff = Fraction((-1) ** (n - 1 - i), n)
        rest = roots[:i] + roots[i + 1:]
        for u in range(len(kinds)):
            s = list(succ)
            s[r] = u
            raw.append(((kinds, s, rest), coeff))
    return _collect(raw, n - 1, rep.p)


def d_h(form: Form) -> Form:
    """Horizontal derivative: graft the last root onto every node."""
    if form.n == 0:
        return Form(0, form.p)
    return _apply(form, _dh_rep, form.n - 1, form.p)


@lru_cache(maxsize=None)
def _dv_rep(rep: Forest) -> Terms:
    kinds, succ, roots = rep.graph
    p = rep.p
    raw = []
    for v, k in enumerate(kinds):
        if k == VERTEX:
            new = list(kinds)
            new[v] = p + 1
            raw.append(((new, succ, roots), Fraction(1)))
    return _collect(raw, rep.n, p + 1)


def d_v(form: Form) -> Form:
    """Vertical derivative: replace each vertex by a new covertex ``p+1``."""
    return _apply(form, _dv_rep, form.n, form.p + 1)


def d_total(form: Form) -> dict[tuple[int, int], Form]:
    """Total derivative ``(-1)**(n+p) d_H + d_V`` as a bigraded value."""
    out = {(form.n, form.p + 1): d_v(form)}
    if form.n > 0:
        out[(form.n - 1, form.p)] = d_h(form) * (-1) ** (form.n + form.p)
    return out


def d_total_graded(value: dict[tuple[int, int], Form]) -> dict[tuple[int, int], Form]:
    """Total derivative of a bigraded value, summed per bidegree."""
    out: dict[tuple[int, int], Form] = {}
    for form in value.values():
        for g, f in d_total(form).items():
            out[g] = out[g] + f if g in out else f
    return out


# ------------------------------------------------------------------ substitution


def _substitute(kinds, succ, roots, c: int, tree: Forest):
    """All forests obtained by replacing node ``c`` by ``tree`` (raw graphs).

    The root of ``tree`` inherits the outgoing edge (or the root number) of
    ``c``; every predecessor of ``c`` is regrafted onto each node of ``tree``.
    """
    t_kinds, t_succ, t_roots = tree.graph
    keep = [v for v in range(len(kinds)) if v != c]
    index = {v: i for i, v in enumerate(keep)}
    off = len(keep)
    t_root = off + t_roots[0]
    base_kinds = [kinds[v] for v in keep] + list(t_kinds)
    base_succ = [-1] * (off + len(t_kinds))
    preds = []
    for v in keep:
        s = succ[v]
        if s == c:
            preds.append(index[v])
        else:
            base_succ[index[v]] = -1 if s == -1 else index[s]
    for w, s in enumerate(t_succ):
        base_succ[off + w] = -1 if s == -1 else off + s
    new_roots = []
    for r in roots:
        if r == c:
            new_roots.append(t_root)
        else:
            new_roots.append(index[r])
    if succ[c] == c:
        preds.append(t_root)
    elif succ[c] != -1:
        base_succ[t_root] = index[succ[c]]
    targets = range(off, off + len(t_kinds))
    for choice in itertools.product(targets, repeat=len(preds)):
        s = list(base_succ)
        for u, t in zip(preds, choice):
            s[u] = t
        yield base_kinds, s, new_roots


@lru_cache(maxsize=None)
def _contract_rep(tree: Forest, rep: Forest) -> Terms:
    kinds, succ, roots = rep.graph
    p = rep.p
    raw = []
    for j in range(1, p + 1):
        moved = _move_covertex_last(kinds, j, p)
        c = moved.index(p)
        sign = Fraction((-1) ** (p - j))
        for g in _substitute(moved, succ, roots, c, tree):
            raw.append((g, sign))
    return _collect(raw, rep.n, p - 1)


def _check_vector_field(tau: Form) -> None:
    if tau.grade != (1, 0):
        raise GradeError(f"expected an aromatic vector field in Omega_1, got grade {tau.grade}")


def contract(tau: Form, form: Form) -> Form:
    """Contraction ``i_tau``: substitute the last covertex by ``tau``, times ``p``."""
    _check_vector_field(tau)
    if form.p == 0:
        return Form(form.n, 0)
    acc: dict[Forest, Fraction] = {}
    for t, a in tau.terms.items():
        for rep, c in form.terms.items():
            for f, b in _contract_rep(t, rep):
                acc[f] = acc.get(f, 0) + a * c * b
    return Form(form.n, form.p - 1, acc)


def lie(tau: Form, form: Form) -> Form:
    """Lie derivative through the vertical Cartan formula ``d_V i_tau + i_tau d_V``."""
    _check_vector_field(tau)
    out = contract(tau, d_v(form))
    if form.p:
        out = out + d_v(contract(tau, form))
    return out


def lie_cartan(tau: Form, form: Form) -> dict[tuple[int, int], Form]:
    """Lie derivative through the full Cartan formula ``d i_tau + i_tau d``, bigraded."""
    out: dict[tuple[int, int], Form] = {}

    def add(g, f):
        out[g] = out[g] + f if g in out else f

    if form.p:
        for g, f in d_total(contract(tau, form)).items():
            add(g, f)
    for g, f in d_total(form).items():
        if f.p:
            add((g[0], g[1] - 1), contract(tau, f))
    return out


def bracket(tau1: Form, tau2: Form) -> Form:
    """Commutator ``L_tau1 tau2 - L_tau2 tau1`` on aromatic vector fields."""
    return lie(tau1, tau2) - lie(tau2, tau1)


@lru_cache(maxsize=None)
def _graft_rep(tree: Forest, rep: Forest) -> Terms:
    kinds, succ, roots = rep.graph
    t_kinds, t_succ, t_roots = tree.graph
    off = len(kinds)
    all_kinds = list(kinds) + list(t_kinds)
    base = list(succ) + [-1 if s == -1 else off + s for s in t_succ]
    t_root = off + t_roots[0]
    raw = []
    for v in range(off):
        s = list(base)
        s[t_root] = v
        raw.append(((all_kinds, s, roots), Fraction(1)))
    return _collect(raw, rep.n, rep.p)


def graft(tau: Form, form: Form) -> Form:
    """Grafting product: attach the root of ``tau`` to every node of ``form``."""
    _check_vector_field(tau)
    acc: dict[Forest, Fraction] = {}
    for t, a in tau.terms.items():
        for rep, c in form.terms.items():
            for f, b in _graft_rep(t, rep):
                acc[f] = acc.get(f, 0) + a * c * b
    return Form(form.n, form.p, acc)


# ------------------------------------------------------------------ Euler operator


@lru_cache(maxsize=None)
def _euler_rep(rep: Forest) -> Terms:
    kinds, succ, roots = rep.graph
    p = rep.p
    raw = []
    for j in range(1, p + 1):
        moved = _move_covertex_last(kinds, j, p)
        c = moved.index(p)
        sources = [u for u, s in enumerate(succ) if s == c]
        # predecessors land on vertices or on other covertices, never on c itself
        targets = [v for v in range(len(kinds)) if v != c]
        sign = Fraction((-1) ** (p - j + len(sources)), p)
        for choice in itertools.product(targets, repeat=len(sources)):
            s = list(succ)
            for u, t in zip(sources, choice):
                s[u] = t
            raw.append(((moved, s, roots), sign))
    return _collect(raw, 0, p)


def interior_euler(form: Form) -> Form:
    """Interior Euler operator on ``Omega_{0,p}``.

    The predecessors of the last covertex are unplugged and regrafted onto the
    other nodes in all ways, with sign ``(-1)**s`` for ``s`` predecessors.
    For ``p = 1`` the targets are the vertices; for ``p >= 2`` other covertices
    are targets too, and the result is averaged over the covertex cosets.
    """
    if form.n != 0:
        raise GradeError("the interior Euler operator acts on Omega_{0,p}")
    if form.p == 0:
        return Form(0, 0)
    return _apply(form, _euler_rep, 0, form.p)


def delta_v(form: Form) -> Form:
    """Variational derivative ``I o d_V``."""
    if form.n != 0:
        raise GradeError("the variational derivative acts on Omega_{0,p}")
    return interior_euler(d_v(form))


def h_v(form: Form) -> Form:
    """Vertical homotopy ``(1/|gamma|) i_bullet gamma``, order by order."""
    if form.p == 0:
        raise GradeError("h_V needs at least one covertex")
    from .textio import parse_expr

    bullet = parse_expr("*")
    out = Form(form.n, form.p - 1)
    for order in form.orders():
        if order == 0:
            raise ValueError("h_V undefined on order-0 forms")
        out = out + contract(bullet, form.homogeneous(order)) / order
    return out


def natural_lie(tau: Form, form: Form) -> Form:
    """Natural Lie derivative ``I L_tau`` on source forms."""
    if interior_euler(form) != form:
        raise ValueError("natural Lie derivative requires an I-fixed source form")
    return interior_euler(lie(tau, form))


def lie_by_insertion(tau: Form, form: Form) -> Form:
    """Independent path for ``p = 0``: replace each vertex by ``tau`` directly."""
    _check_vector_field(tau)
    if form.p != 0:
        raise GradeError("direct insertion is only defined for p = 0")
    raw = []
    for t, a in tau.terms.items():
        for rep, c in form.terms.items():
            kinds, succ, roots = rep.graph
            for v in range(len(kinds)):
                for g in _substitute(kinds, succ, roots, v, t):
                    raw.append((g, a * c))
    pairs = [(Forest.from_graph(*g), coeff) for g, coeff in raw]
    return wedge(pairs, form.n, 0)


def apply_op(tag: OperatorTag, form: Form) -> Form | dict[tuple[int, int], Form]:
    if tag is OperatorTag.DH:
        return d_h(form)
    if tag is OperatorTag.DV:
        return d_v(form)
    if tag is OperatorTag.DTOTAL:
        return d_total(form)
    if tag is OperatorTag.WEDGE:
        return wedge(form)
    if tag is OperatorTag.INTERIOR_EULER:
        return interior_euler(form)
    return delta_v(form)
