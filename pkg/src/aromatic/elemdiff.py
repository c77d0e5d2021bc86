"""Elementary differentials of aromatic forms for polynomial vector fields.

Each node carries an index; a node with predecessors ``u_1..u_m`` contributes
the derivative of ``f^{i_v}`` with respect to ``x^{i_{u_1}} .. x^{i_{u_m}}``,
and all indices except the root's are summed.  With this convention the
1-loop evaluates to ``div f`` and ``F(d_H tau) = div F(tau)``.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

import sympy
from sympy import Poly, QQ

from .forest import VERTEX, Forest
from .forms import Form, GradeError
from .textio import parse_field_text, print_polynomial


def variables(dim: int) -> tuple[sympy.Symbol, ...]:
    return sympy.symbols(f"x1:{dim + 1}")


def polynomial(terms: dict[tuple[int, ...], Fraction], dim: int) -> Poly:
    gens = variables(dim)
    expr = sum((sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*(g**e for g, e in zip(gens, exps)))
                for exps, c in ((k, Fraction(v)) for k, v in terms.items())), sympy.Integer(0))
    return Poly(expr, *gens, domain=QQ)


@dataclass
class PolyVectorField:
    dim: int
    components: tuple[Poly, ...]
    _derivs: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.components) != self.dim:
            raise ValueError(f"expected {self.dim} components, got {len(self.components)}")

    @classmethod
    def from_text(cls, text: str) -> PolyVectorField:
        dim, comps = parse_field_text(text)
        return cls(dim, tuple(polynomial(c, dim) for c in comps))

    @classmethod
    def from_exprs(cls, exprs: Sequence) -> PolyVectorField:
        dim = len(exprs)
        gens = variables(dim)
        return cls(dim, tuple(Poly(sympy.sympify(e), *gens, domain=QQ) for e in exprs))

    @property
    def gens(self) -> tuple:
        return variables(self.dim)

    def zero(self) -> Poly:
        return Poly(0, *self.gens, domain=QQ)

    def one(self) -> Poly:
        return Poly(1, *self.gens, domain=QQ)

    def derivative(self, i: int, indices: Sequence[int]) -> Poly:
        """Partial derivative of component ``i`` with respect to the given variables."""
        key = (i, tuple(sorted(indices)))
        out = self._derivs.get(key)
        if out is None:
            out = self.components[i]
            for j in key[1]:
                out = out.diff(self.gens[j])
            self._derivs[key] = out
        return out

    def to_text(self) -> str:
        parts = [f"d={self.dim}"]
        for k, c in enumerate(self.components, start=1):
            terms = {m: Fraction(int(v.p), int(v.q)) for m, v in c.terms()}
            parts.append(f"f{k} = {print_polynomial(terms)}")
        return "; ".join(parts)


def divergence(f: PolyVectorField | Sequence[Poly]) -> Poly:
    comps = f.components if isinstance(f, PolyVectorField) else tuple(f)
    gens = comps[0].gens
    return reduce(lambda a, b: a + b, (c.diff(gens[i]) for i, c in enumerate(comps)))


def _random_poly(rng: random.Random, gens, degree: int) -> Poly:
    expr = sympy.Integer(0)
    for exps in itertools.product(range(degree + 1), repeat=len(gens)):
        if sum(exps) <= degree and rng.random() < 0.6:
            expr += rng.randint(-3, 3) * sympy.Mul(*(g**e for g, e in zip(gens, exps)))
    return Poly(expr, *gens, domain=QQ)


def sample_field(dim: int, degree: int, seed: int) -> PolyVectorField:
    """Random polynomial field with small integer coefficients, deterministic per seed."""
    rng = random.Random(seed)
    gens = variables(dim)
    return PolyVectorField(dim, tuple(_random_poly(rng, gens, degree) for _ in range(dim)))


def sample_divfree(dim: int, degree: int, seed: int) -> PolyVectorField:
    """Divergence-free field ``f^i = sum_j d_j A_ij`` with a random antisymmetric potential ``A``."""
    if dim < 2:
        raise ValueError("divergence-free sampling needs dimension >= 2")
    rng = random.Random(seed)
    gens = variables(dim)
    pot = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            pot[(i, j)] = _random_poly(rng, gens, degree + 1)
    comps = []
    for i in range(dim):
        acc = Poly(0, *gens, domain=QQ)
        for j in range(dim):
            if i < j:
                acc += pot[(i, j)].diff(gens[j])
            elif j < i:
                acc -= pot[(j, i)].diff(gens[j])
        comps.append(acc)
    return PolyVectorField(dim, tuple(comps))


# ------------------------------------------------------------------ evaluation


def _node_vector(node: tuple, f: PolyVectorField, extra: int | None = None) -> list[Poly]:
    """Component list ``F^i`` of the subtree at ``node``; ``extra`` adds one fixed derivative index."""
    if node[0] != VERTEX:
        raise GradeError("elementary differentials are defined for forests without covertices")
    kids = [_node_vector(c, f) for c in node[1]]
    out = []
    fixed = () if extra is None else (extra,)
    for i in range(f.dim):
        acc = f.zero()
        for idx in itertools.product(range(f.dim), repeat=len(kids)):
            term = f.derivative(i, fixed + idx)
            if term.is_zero:
                continue
            for kid, j in zip(kids, idx):
                term = term * kid[j]
            acc += term
        out.append(acc)
    return out


def _aroma_value(aroma: tuple, f: PolyVectorField) -> Poly:
    # cycle node t has matrix M_t[i][j]: index j belongs to its cycle predecessor
    mats = [[_node_vector(node, f, extra=j) for j in range(f.dim)] for node in aroma]
    # mats[t][j][i] = M_t[i][j]
    prod = [[mats[0][j][i] for j in range(f.dim)] for i in range(f.dim)]
    for t in range(1, len(aroma)):
        m = mats[t]
        prod = [[sum((m[c][a] * prod[c][b] for c in range(f.dim)), f.zero()) for b in range(f.dim)]
                for a in range(f.dim)]
    return sum((prod[i][i] for i in range(f.dim)), f.zero())


def forest_differential(forest: Forest, f: PolyVectorField) -> Poly | list[Poly]:
    aromas, trees = forest.key
    if forest.p:
        raise GradeError("elementary differentials are defined for forests without covertices")
    if len(trees) > 1:
        raise GradeError("tensor-valued elementary differentials (n >= 2) are not supported")
    scalar = f.one()
    for aroma in aromas:
        scalar = scalar * _aroma_value(aroma, f)
    if not trees:
        return scalar
    return [scalar * c for c in _node_vector(trees[0], f)]


def elementary_differential(gamma: Form | Forest, f: PolyVectorField) -> Poly | list[Poly]:
    """``F(gamma)(f)``: a polynomial for ``n = 0``, a list of ``d`` polynomials for ``n = 1``."""
    if isinstance(gamma, Forest):
        return forest_differential(gamma, f)
    if gamma.p:
        raise GradeError("elementary differentials are defined for forms without covertices")
    if gamma.n > 1:
        raise GradeError("tensor-valued elementary differentials (n >= 2) are not supported")
    if gamma.n == 0:
        acc = f.zero()
        for forest, c in gamma.terms.items():
            acc += forest_differential(forest, f) * _q(c)
        return acc
    acc = [f.zero() for _ in range(f.dim)]
    for forest, c in gamma.terms.items():
        vals = forest_differential(forest, f)
        acc = [a + v * _q(c) for a, v in zip(acc, vals)]
    return acc


def _q(c: Fraction) -> sympy.Rational:
    return sympy.Rational(c.numerator, c.denominator)


def is_zero_value(value: Poly | Sequence[Poly]) -> bool:
    if isinstance(value, Poly):
        return value.is_zero
    return all(v.is_zero for v in value)


def f_symmetry_check(tau: Form, gamma: Form, f: PolyVectorField) -> bool:
    """Does ``F(L_tau gamma)(f)`` vanish identically?"""
    from .calculus import lie

    return is_zero_value(elementary_differential(lie(tau, gamma), f))


def evaluate(poly: Poly, point: Sequence[Fraction]) -> Fraction:
    val = poly.eval(tuple(_q(Fraction(x)) for x in point)) if poly.gens else poly.as_expr()
    val = sympy.Rational(val)
    return Fraction(int(val.p), int(val.q))


def taylor_oracle(f: PolyVectorField, y0: Sequence[Fraction], maxorder: int) -> list[list[Fraction]]:
    """Taylor coefficients ``y^(k)(0)/k!`` of the solution of ``y' = f(y)``, ``k = 1..maxorder``."""
    if maxorder > 6:
        raise ValueError("the Taylor oracle is limited to order 6")
    gens = f.gens
    g = list(f.components)
    out = []
    for k in range(1, maxorder + 1):
        out.append([evaluate(c, y0) / math.factorial(k) for c in g])
        g = [sum((c.diff(gens[j]) * f.components[j] for j in range(f.dim)), f.zero()) for c in g]
    return out


def series_values(series, f: PolyVectorField, y0: Sequence[Fraction]) -> list[list[Fraction]]:
    """Order-by-order evaluation ``F(series_k)(f)(y0)`` of a B-series in Omega_1."""
    out = []
    for k in range(1, series.maxorder + 1):
        vals = elementary_differential(series[k], f)
        out.append([evaluate(v, y0) for v in vals])
    return out
