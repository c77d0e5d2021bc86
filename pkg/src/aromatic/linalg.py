"""Exact graded linear algebra over the rationals.

Operators are materialized as sparse column matrices between wedge-basis
slices; ranks, kernels and preimages come from a deterministic sparse
Gauss-Jordan elimination in :class:`fractions.Fraction` arithmetic (pivot =
first nonzero row in canonical basis order).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from . import calculus
from .calculus import OperatorTag
from .forest import Forest, enumerate_forests
from .forms import Form, GradeError, wedge_normalize

Column = dict[int, Fraction]


@dataclass(frozen=True)
class BasisSlice:
    n: int
    p: int
    order: int
    elements: tuple[Forest, ...]
    index: dict[Forest, int] = field(compare=False, repr=False, hash=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def grade(self) -> tuple[int, int, int]:
        return (self.n, self.p, self.order)

    def coordinates(self, form: Form) -> Column:
        if form.grade != (self.n, self.p):
            raise GradeError(f"form of grade {form.grade} outside slice {self.grade}")
        col: Column = {}
        for f, c in form.terms.items():
            if f.order != self.order:
                raise GradeError(f"term of order {f.order} outside slice {self.grade}")
            col[self.index[f]] = c
        return col

    def form(self, coords: Column) -> Form:
        return Form(self.n, self.p, {self.elements[i]: c for i, c in coords.items()})


@lru_cache(maxsize=None)
def basis_slice(n: int, p: int, order: int) -> BasisSlice:
    """Wedge basis of ``Omega_{n,p}`` at one order, sorted by canonical key."""
    if n < 0 or p < 0:
        return BasisSlice(n, p, order, ())
    reps = set()
    for f in enumerate_forests(n, p, order):
        norm = wedge_normalize(f)
        if norm is not None:
            reps.add(norm[0])
    elements = tuple(sorted(reps))
    return BasisSlice(n, p, order, elements, {f: i for i, f in enumerate(elements)})


@dataclass
class GradedMatrix:
    domain: BasisSlice
    codomain: BasisSlice
    columns: list[Column]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.codomain), len(self.domain))

    def is_zero(self) -> bool:
        return not any(self.columns)

    def dense(self) -> list[list[Fraction]]:
        rows = [[Fraction(0)] * len(self.domain) for _ in self.codomain.elements]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def rank(self) -> int:
        return len(_row_reduce(self.columns, len(self.codomain))[1])


_OPERATORS: dict[OperatorTag, Callable[[Form], Form]] = {
    OperatorTag.DH: calculus.d_h,
    OperatorTag.DV: calculus.d_v,
    OperatorTag.INTERIOR_EULER: calculus.interior_euler,
    OperatorTag.DELTA_V: calculus.delta_v,
    OperatorTag.WEDGE: lambda f: f,
}


def matrix_of(fn: Callable[[Form], Form], domain: BasisSlice, codomain: BasisSlice) -> GradedMatrix:
    columns = []
    for rep in domain.elements:
        image = fn(Form(domain.n, domain.p, {rep: Fraction(1)}))
        columns.append(codomain.coordinates(image) if image else {})
    return GradedMatrix(domain, codomain, columns)


@lru_cache(maxsize=None)
def operator_matrix(op: OperatorTag, n: int, p: int, order: int) -> GradedMatrix:
    """Matrix of ``op`` on the slice ``Omega_{n,p}`` of the given order."""
    if op is OperatorTag.DTOTAL:
        raise ValueError("the total derivative is bigraded; use DH and DV separately")
    if op in (OperatorTag.INTERIOR_EULER, OperatorTag.DELTA_V) and n != 0:
        raise GradeError(f"{op.value} is defined on Omega_{{0,p}} only")
    if op is OperatorTag.DH and n == 0:
        raise GradeError("d_H has no codomain below n = 0")
    tn, tp = op.target(n, p)
    return matrix_of(_OPERATORS[op], basis_slice(n, p, order), basis_slice(tn, tp, order))


def compose(outer: GradedMatrix, inner: GradedMatrix) -> GradedMatrix:
    columns = []
    for col in inner.columns:
        out: Column = defaultdict(Fraction)
        for k, v in col.items():
            for i, w in outer.columns[k].items():
                out[i] += v * w
        columns.append({i: v for i, v in out.items() if v})
    return GradedMatrix(inner.domain, outer.codomain, columns)


# ------------------------------------------------------------------ elimination


def _row_reduce(columns: Sequence[Column], nrows: int) -> tuple[list[dict[int, Fraction]], list[tuple[int, int]]]:
    """Reduced row echelon form; returns rows and ``(pivot column, row)`` pairs."""
    rows: list[dict[int, Fraction]] = [dict() for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            if v:
                rows[i][j] = Fraction(v)
    where: dict[int, set[int]] = defaultdict(set)
    for i, row in enumerate(rows):
        for j in row:
            where[j].add(i)
    used = [False] * nrows
    pivots = []
    for j in range(len(columns)):
        candidates = [i for i in where.get(j, ()) if not used[i]]
        if not candidates:
            continue
        pr = min(candidates)
        used[pr] = True
        prow = rows[pr]
        inv = 1 / prow[j]
        for k in prow:
            prow[k] *= inv
        for i in sorted(where[j]):
            if i == pr:
                continue
            row = rows[i]
            factor = row[j]
            for k, v in prow.items():
                nv = row.get(k, 0) - factor * v
                if nv:
                    row[k] = nv
                    where[k].add(i)
                else:
                    row.pop(k, None)
                    where[k].discard(i)
        pivots.append((j, pr))
    return rows, pivots


def rank(m: GradedMatrix) -> int:
    return m.rank()


def kernel(m: GradedMatrix) -> list[Form]:
    """Null-space basis (one vector per free column, in column order)."""
    ncols = len(m.domain)
    rows, pivots = _row_reduce(m.columns, len(m.codomain))
    pivot_cols = {j for j, _ in pivots}
    out = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        coords: Column = {free: Fraction(1)}
        for j, r in pivots:
            v = rows[r].get(free)
            if v:
                coords[j] = -v
        out.append(m.domain.form(coords))
    return out


def image_basis(m: GradedMatrix) -> list[Form]:
    """Images of the pivot columns, a basis of the column space."""
    _, pivots = _row_reduce(m.columns, len(m.codomain))
    return [m.codomain.form(m.columns[j]) for j, _ in sorted(pivots)]


def solve_in_image(m: GradedMatrix, target: Form) -> Form | None:
    """A preimage of ``target`` under ``m`` (free variables set to 0), or None."""
    b = m.codomain.coordinates(target) if target else {}
    ncols = len(m.domain)
    rows, pivots = _row_reduce(list(m.columns) + [b], len(m.codomain))
    if any(j == ncols for j, _ in pivots):
        return None
    coords = {j: rows[r][ncols] for j, r in pivots if rows[r].get(ncols)}
    return m.domain.form(coords)


def span_rank(forms: Sequence[Form], slice_: BasisSlice) -> int:
    cols = [slice_.coordinates(f) for f in forms]
    return len(_row_reduce(cols, len(slice_))[1])


def in_span(target: Form, forms: Sequence[Form], slice_: BasisSlice) -> bool:
    return span_rank(list(forms) + [target], slice_) == span_rank(forms, slice_)


# ------------------------------------------------------------------ solving d_H


def solve_dh(target: Form, order: int | None = None) -> Form | None:
    """Witness ``eta`` with ``d_H eta = target``, solved order by order."""
    orders = [order] if order is not None else target.orders()
    eta = Form(target.n + 1, target.p)
    for k in orders:
        m = operator_matrix(OperatorTag.DH, target.n + 1, target.p, k)
        w = solve_in_image(m, target.homogeneous(k))
        if w is None:
            return None
        eta = eta + w
    return eta


# ------------------------------------------------------------------ exactness


@dataclass
class SlotReport:
    """One exactness check ``dim Ker(outgoing) = dim Img(incoming)``."""

    kind: str
    n: int
    p: int
    order: int
    dim: int
    kernel_dim: int
    image_dim: int
    composition_zero: bool

    @property
    def exact(self) -> bool:
        return self.kernel_dim == self.image_dim and self.composition_zero

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "p": self.p,
            "order": self.order,
            "dim": self.dim,
            "kernel_dim": self.kernel_dim,
            "image_dim": self.image_dim,
            "exact": self.exact,
        }


class ExactnessError(AssertionError):
    """Raised when a slot of the bicomplex fails to be exact."""


def _empty(domain: BasisSlice, codomain: BasisSlice) -> GradedMatrix:
    return GradedMatrix(domain, codomain, [{} for _ in domain.elements])


def _dh(n: int, p: int, order: int) -> GradedMatrix:
    if n > order:
        return _empty(basis_slice(n, p, order), basis_slice(n - 1, p, order))
    return operator_matrix(OperatorTag.DH, n, p, order)


def _dv(n: int, p: int, order: int) -> GradedMatrix:
    if p < 0:
        return _empty(basis_slice(n, p, order), basis_slice(n, p + 1, order))
    return operator_matrix(OperatorTag.DV, n, p, order)


@lru_cache(maxsize=None)
def source_basis(p: int, order: int) -> tuple[Form, ...]:
    """Basis of the source forms ``I(Omega_{0,p})`` at one order."""
    if p == 0:
        return tuple(Form(0, 0, {f: Fraction(1)}) for f in basis_slice(0, 0, order).elements)
    return tuple(image_basis(operator_matrix(OperatorTag.INTERIOR_EULER, 0, p, order)))


def _delta_on_sources(p: int, order: int) -> GradedMatrix:
    srcs = source_basis(p, order)
    codomain = basis_slice(0, p + 1, order)
    cols = [codomain.coordinates(calculus.delta_v(s)) if s else {} for s in srcs]
    dom = BasisSlice(0, p, order, ())  # coordinates are relative to ``srcs``
    m = GradedMatrix(dom, codomain, cols)
    return m


def _rank_cols(cols: Sequence[Column], nrows: int) -> int:
    return len(_row_reduce(cols, nrows)[1])


def _composition_zero(outer: GradedMatrix, inner: GradedMatrix) -> bool:
    return compose(outer, inner).is_zero()


def exactness_report(maxorder: int, maxn: int, maxp: int, *, raise_on_failure: bool = False) -> list[SlotReport]:
    """Check ``dim Ker = dim Img`` at every interior slot up to the given bounds."""
    out: list[SlotReport] = []
    for order in range(1, maxorder + 1):
        # horizontal rows, n >= 1
        for p in range(0, maxp + 1):
            for n in range(1, maxn + 1):
                outgoing = _dh(n, p, order)
                incoming = _dh(n + 1, p, order)
                dim = len(outgoing.domain)
                out.append(SlotReport("horizontal", n, p, order, dim, dim - outgoing.rank(), incoming.rank(),
                                      _composition_zero(outgoing, incoming)))
            # left end of each row: Ker I (p >= 1) or Ker delta_V (p = 0) against Img d_H
            incoming = _dh(1, p, order)
            op = OperatorTag.INTERIOR_EULER if p else OperatorTag.DELTA_V
            outgoing = operator_matrix(op, 0, p, order)
            dim = len(outgoing.domain)
            out.append(SlotReport("augmented" if p else "euler-lagrange", 0, p, order, dim, dim - outgoing.rank(),
                                  incoming.rank(), _composition_zero(outgoing, incoming)))
        # vertical columns
        for n in range(0, maxn + 1):
            for p in range(0, maxp + 1):
                outgoing = _dv(n, p, order)
                dim = len(outgoing.domain)
                if p == 0:
                    image_dim, comp = 0, True
                else:
                    incoming = _dv(n, p - 1, order)
                    image_dim, comp = incoming.rank(), _composition_zero(outgoing, incoming)
                out.append(SlotReport("vertical", n, p, order, dim, dim - outgoing.rank(), image_dim, comp))
        # Euler-Lagrange complex on source forms
        for p in range(1, maxp + 1):
            outgoing = _delta_on_sources(p, order)
            dim = len(outgoing.columns)
            incoming = _delta_on_sources(p - 1, order)
            image_dim = _rank_cols(incoming.columns, len(incoming.codomain))
            kernel_dim = dim - _rank_cols(outgoing.columns, len(outgoing.codomain))
            comp = all(not calculus.delta_v(incoming.codomain.form(c)) for c in incoming.columns)
            out.append(SlotReport("source", 0, p, order, dim, kernel_dim, image_dim, comp))
    if raise_on_failure:
        bad = [r for r in out if not r.exact]
        if bad:
            r = bad[0]
            raise ExactnessError(f"{r.kind} slot (n={r.n}, p={r.p}, order={r.order}) not exact: "
                                 f"dim Ker {r.kernel_dim} != dim Img {r.image_dim}")
    return out
