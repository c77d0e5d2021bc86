"""Aromatic forms: exact rational combinations of wedge-normalized forests.

A ``Form`` of grade ``(n, p)`` maps orbit representatives ``rep`` to
coefficients ``c`` and stands for ``sum c * wedge(rep)``.  Orders may be
mixed inside one Form (graded truncations of series); use
:meth:`Form.homogeneous` to split them.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Union

from .forest import Forest, permute

Scalar = Union[int, Fraction]


class GradeError(ValueError):
    """Raised when operands live in incompatible grades."""


@lru_cache(maxsize=None)
def wedge_normalize(forest: Forest) -> tuple[Forest, int] | None:
    """Orbit representative of ``forest`` and the sign ``s`` with ``wedge(forest) = s * wedge(rep)``.

    Returns ``None`` when an odd permutation fixes the forest, i.e. its wedge vanishes.
    """
    n, p = forest.n, forest.p
    if n < 2 and p < 2:
        return forest, 1
    orbit: dict[Forest, int] = {}
    for sr in itertools.permutations(range(n)):
        for sc in itertools.permutations(range(p)):
            image, sign = permute(forest, sr, sc)
            prev = orbit.setdefault(image, sign)
            if prev != sign:
                return None
    rep = min(orbit)
    return rep, orbit[rep]


class Form:
    """Element of the space of aromatic forms with ``n`` roots and ``p`` covertices."""

    __slots__ = ("n", "p", "terms")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, n: int, p: int, terms: dict[Forest, Fraction] | None = None):
        self.n = n
        self.p = p
        self.terms: dict[Forest, Fraction] = {}
        for f, c in (terms or {}).items():
            if c:
                self.terms[f] = Fraction(c)

    # construction -----------------------------------------------------------------
    @classmethod
    def zero(cls, n: int, p: int = 0) -> Form:
        return cls(n, p)

    @classmethod
    def from_forest(cls, forest: Forest, coeff: Scalar = 1) -> Form:
        return wedge([(forest, coeff)], forest.n, forest.p)

    # inspection -------------------------------------------------------------------
    @property
    def grade(self) -> tuple[int, int]:
        return (self.n, self.p)

    def orders(self) -> list[int]:
        return sorted({f.order for f in self.terms})

    def homogeneous(self, order: int) -> Form:
        return Form(self.n, self.p, {f: c for f, c in self.terms.items() if f.order == order})

    def truncate(self, maxorder: int) -> Form:
        return Form(self.n, self.p, {f: c for f, c in self.terms.items() if f.order <= maxorder})

    def items(self) -> Iterator[tuple[Forest, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __iter__(self) -> Iterator[tuple[Forest, Fraction]]:
        return self.items()

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, forest: Forest) -> Fraction:
        """Coefficient of ``wedge(forest)``, with the orbit sign applied."""
        norm = wedge_normalize(forest)
        if norm is None:
            return Fraction(0)
        rep, sign = norm
        return sign * self.terms.get(rep, Fraction(0))

    # arithmetic -------------------------------------------------------------------
    def _check(self, other: Form) -> None:
        if (self.n, self.p) != (other.n, other.p):
            raise GradeError(f"grade mismatch: ({self.n},{self.p}) vs ({other.n},{other.p})")

    def __add__(self, other: Form) -> Form:
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        terms = dict(self.terms)
        for f, c in other.terms.items():
            terms[f] = terms.get(f, 0) + c
        return Form(self.n, self.p, terms)

    __radd__ = __add__

    def __neg__(self) -> Form:
        return Form(self.n, self.p, {f: -c for f, c in self.terms.items()})

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> Form:
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return Form(self.n, self.p, {f: c * scalar for f, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> Form:
        return self * (Fraction(1) / Fraction(scalar))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Form):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return (self.n, self.p) == (other.n, other.p) and self.terms == other.terms

    def __repr__(self) -> str:
        from .textio import print_form

        return f"Form[{self.n},{self.p}]({print_form(self)!r})"

    def __str__(self) -> str:
        from .textio import print_form

        return print_form(self)


def wedge(combination: Iterable[tuple[Forest, Scalar]] | Form, n: int | None = None, p: int | None = None) -> Form:
    """Alternate a forest combination over roots and covertices.

    ``combination`` is an iterable of ``(forest, coefficient)`` pairs (or a Form,
    returned unchanged since forms are already alternating).  All forests must
    share ``(n, p)``; pass ``n``/``p`` explicitly for an empty combination.
    """
    if isinstance(combination, Form):
        return combination
    terms: dict[Forest, Fraction] = {}
    for forest, coeff in combination:
        if n is None:
            n, p = forest.n, forest.p
        elif (forest.n, forest.p) != (n, p):
            raise GradeError(f"mixed grades in wedge: ({forest.n},{forest.p}) vs ({n},{p})")
        norm = wedge_normalize(forest)
        if norm is None or not coeff:
            continue
        rep, sign = norm
        terms[rep] = terms.get(rep, 0) + sign * Fraction(coeff)
    if n is None:
        raise GradeError("cannot infer the grade of an empty combination")
    return Form(n, p, terms)


def concat(mu: Form, gamma: Form) -> Form:
    """Product of a Lagrangian ``mu`` (no roots, no covertices) with ``gamma``."""
    if mu.grade != (0, 0):
        raise GradeError("concat expects its first argument in Omega_0")
    out: list[tuple[Forest, Fraction]] = []
    for m, a in mu.terms.items():
        for g, b in gamma.terms.items():
            out.append((Forest((tuple(sorted(m.key[0] + g.key[0])), g.key[1])), a * b))
    return wedge(out, gamma.n, gamma.p)
