"""Enveloping algebra of aromatic vector fields and the Lie exponential.

Monomials are multisets of aromatic trees.  The Lie derivative extends to
monomials by ``L_1 = id`` and ``L_{tau.m} = L_tau L_m - L_{L_tau m}``, where
``L_tau`` acts on a monomial as a derivation over its factors.  The
recursion is multilinear, so it is run on factors that are whole forms.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .calculus import lie
from .forest import Forest, check_capacity, rooted_shapes
from .forms import Form, GradeError

Monomial = tuple[Forest, ...]
UNIT: Monomial = ()


def monomial(*factors: Forest) -> Monomial:
    for f in factors:
        if f.n != 1 or f.p != 0:
            raise GradeError("monomial factors must be aromatic trees (one root, no covertices)")
    return tuple(sorted(factors))


class EnvElement(dict):
    """Rational combination of monomials, ``{Monomial: Fraction}``."""

    @classmethod
    def unit(cls) -> EnvElement:
        return cls({UNIT: Fraction(1)})

    @classmethod
    def from_form(cls, tau: Form) -> EnvElement:
        if tau.grade != (1, 0):
            raise GradeError("expected a form in Omega_1")
        return cls({(t,): c for t, c in tau.terms.items()})

    def __add__(self, other: EnvElement) -> EnvElement:
        out = EnvElement(self)
        for m, c in other.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def scale(self, c) -> EnvElement:
        return EnvElement({m: v * c for m, v in self.items() if v * c})

    def __mul__(self, other: EnvElement) -> EnvElement:
        out = EnvElement()
        for a, x in self.items():
            for b, y in other.items():
                m = tuple(sorted(a + b))
                out[m] = out.get(m, 0) + x * y
        return EnvElement({m: v for m, v in out.items() if v})


def shuffle_coproduct(m: Monomial) -> list[tuple[Monomial, Monomial]]:
    """All ``2**k`` splits of the factors of ``m``, listed with multiplicity."""
    k = len(m)
    out = []
    for mask in range(1 << k):
        left = tuple(m[i] for i in range(k) if mask >> i & 1)
        right = tuple(m[i] for i in range(k) if not mask >> i & 1)
        out.append((left, right))
    return out


def lie_on_monomial(tau: Form, m: Monomial) -> EnvElement:
    """``L_tau`` acting on a monomial as a derivation over its factors."""
    out = EnvElement()
    for i, factor in enumerate(m):
        image = lie(tau, Form(1, 0, {factor: Fraction(1)}))
        rest = m[:i] + m[i + 1:]
        for t, c in image.terms.items():
            out = out + EnvElement({tuple(sorted(rest + (t,))): c})
    return out


def lie_product(factors: Sequence[Form], gamma: Form, peel: int = 0, maxorder: int | None = None) -> Form:
    """``L_{f_1 . ... . f_k} gamma`` for form-valued factors.

    ``peel`` selects which factor is split off first; the result does not
    depend on it.  ``maxorder`` truncates intermediate results (all factors
    are expected to have order >= 2 when it is given).
    """
    def cut(f: Form) -> Form:
        return f if maxorder is None else f.truncate(maxorder)

    if not factors:
        return cut(gamma)
    factors = list(factors)
    first = factors.pop(peel % len(factors))
    out = cut(lie(first, lie_product(factors, gamma, maxorder=maxorder)))
    for j in range(len(factors)):
        changed = factors[:j] + [lie(first, factors[j])] + factors[j + 1:]
        if changed[j]:
            out = out - lie_product(changed, gamma, maxorder=maxorder)
    return cut(out)


def lie_extended(m: EnvElement | Monomial, gamma: Form, peel: int = 0) -> Form:
    """Extended Lie derivative ``L_m gamma`` for an element of the enveloping algebra."""
    if isinstance(m, tuple):
        m = EnvElement({m: Fraction(1)})
    out = Form(gamma.n, gamma.p)
    for mono, c in m.items():
        factors = [Form(1, 0, {t: Fraction(1)}) for t in mono]
        out = out + lie_product(factors, gamma, peel) * c
    return out


def exp_coefficients(tau: Form, gamma: Form, kmax: int, maxorder: int | None = None) -> list[Form]:
    """Coefficients of ``eps**k`` in ``L_{exp(eps tau)} gamma`` for ``k = 0..kmax``."""
    return [lie_product([tau] * k, gamma, maxorder=maxorder) / math.factorial(k) for k in range(kmax + 1)]


@dataclass
class Series:
    """Graded truncation ``{order: homogeneous Form}`` of a formal series."""

    n: int
    p: int
    maxorder: int
    components: dict[int, Form] = field(default_factory=dict)

    @classmethod
    def from_form(cls, form: Form, maxorder: int) -> Series:
        return cls(form.n, form.p, maxorder, {k: form.homogeneous(k) for k in form.orders() if k <= maxorder})

    def to_form(self) -> Form:
        out = Form(self.n, self.p)
        for f in self.components.values():
            out = out + f
        return out

    def __getitem__(self, order: int) -> Form:
        return self.components.get(order, Form(self.n, self.p))

    def orders(self) -> list[int]:
        return sorted(k for k, f in self.components.items() if f)


def _as_form(x: Form | Series) -> Form:
    return x.to_form() if isinstance(x, Series) else x


def exp_lie(tau: Form | Series, gamma: Form | Series, maxorder: int) -> Series:
    """Graded truncation of ``L_{exp(tau)} gamma``.

    ``tau`` must have no order-1 part, so every factor raises the order and
    the exponential is a finite sum below ``maxorder``.
    """
    tau_f, gamma_f = _as_form(tau), _as_form(gamma).truncate(maxorder)
    if tau_f.grade != (1, 0):
        raise GradeError("tau must be an aromatic vector field")
    if tau_f and min(tau_f.orders()) < 2:
        raise ValueError("tau has an order-1 component; the exponential does not truncate")
    if not gamma_f:
        return Series(gamma_f.n, gamma_f.p, maxorder)
    if maxorder < min(gamma_f.orders()):
        raise ValueError("truncation below the smallest order present")
    tau_f = tau_f.truncate(maxorder)
    # each factor of tau raises the order by at least min|tau| - 1
    kmax = (maxorder - min(gamma_f.orders())) // (min(tau_f.orders()) - 1) if tau_f else 0
    total = Form(gamma_f.n, gamma_f.p)
    for term in exp_coefficients(tau_f, gamma_f, kmax, maxorder):
        total = total + term
    return Series.from_form(total, maxorder)


def symmetry_number(tree: tuple) -> int:
    """Order of the automorphism group of a rooted tree node key."""
    kids = tree[1]
    out = 1
    for child, group in itertools.groupby(kids):
        mult = len(list(group))
        out *= math.factorial(mult) * symmetry_number(child) ** mult
    return out


def density(tree: tuple) -> int:
    size = 1 + sum(_size(c) for c in tree[1])
    out = size
    for c in tree[1]:
        out *= density(c)
    return out


def _size(tree: tuple) -> int:
    return 1 + sum(_size(c) for c in tree[1])


def exact_flow(maxorder: int) -> Series:
    """B-series of the exact flow: every rooted tree with coefficient ``1/(sigma * density)``."""
    if maxorder < 1:
        raise ValueError("maxorder must be at least 1")
    check_capacity(maxorder)
    comps = {}
    for k in range(1, maxorder + 1):
        terms = {Forest(((), (t,))): Fraction(1, symmetry_number(t) * density(t)) for t in rooted_shapes(k)}
        comps[k] = Form(1, 0, terms)
    return Series(1, 0, maxorder, comps)


def monomials_of(trees: Iterable[Forest], max_factors: int) -> list[Monomial]:
    """All monomials with 1..max_factors factors drawn from ``trees``."""
    trees = sorted(trees)
    out = []
    for k in range(1, max_factors + 1):
        out.extend(itertools.combinations_with_replacement(trees, k))
    return out
