from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from aromatic.calculus import interior_euler
from aromatic.forest import Forest
from aromatic.forms import Form
from aromatic.linalg import basis_slice
from aromatic.textio import (
    ParseError,
    SourceSpan,
    parse_expr,
    parse_field_text,
    parse_forest,
    parse_polynomial,
    print_form,
    print_forest,
    print_polynomial,
)


def test_loop_lagrangian():
    g = parse_expr("<*>")
    assert g.grade == (0, 0) and g.orders() == [1]


def test_rational_coefficients():
    g = parse_expr("1/2 <*,*> * - 1/2 *[*,*]")
    assert len(g.terms) == 2
    assert sorted(g.terms.values()) == [Fraction(-1, 2), Fraction(1, 2)]


def test_source_generator_is_fixed():
    g = parse_expr("<*[o1]>")
    assert interior_euler(g) == g


def test_zero_prints_as_zero():
    assert print_form(Form(1, 0)) == "0"
    assert parse_expr("0") == 0


def test_s3_canonical_text():
    s3 = parse_expr("<*[*]> * + <*,*> * - <*> *[*] - *[*,*]")
    text = print_form(s3)
    assert text == "-*[*,*] - <*> *[*] + <*,*> * + <*[*]> *"
    assert parse_expr(text) == s3


def test_cycle_direction():
    # <a,b,c>: root of a points to root of b, b to c, c back to a
    f = parse_forest("<o1,o2,o3>")
    kinds, succ, _ = f.graph
    nxt = {kinds[v]: kinds[s] for v, s in enumerate(succ)}
    assert nxt == {1: 2, 2: 3, 3: 1}
    assert parse_forest("<o2,o3,o1>") == f
    assert parse_forest("<o1,o3,o2>") != f


def test_tree_children_are_predecessors():
    kinds, succ, roots = parse_forest("o1[o2]").graph
    root = roots[0]
    child = next(v for v in range(len(kinds)) if v != root)
    assert kinds[root] == 1 and kinds[child] == 2 and succ[child] == root


def test_empty_forest_prints_as_one():
    assert print_forest(Forest(((), ()))) == "1"


@pytest.mark.parametrize("text", ["*[", "<>", "* + ", "2/0 *", "o0", "<*> + *", "o2", "*]", "* * o1 ^"])
def test_parse_errors(text):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    span = info.value.span
    assert isinstance(span, SourceSpan)
    assert 0 <= span.start <= span.end <= len(text)


@pytest.mark.parametrize("n,p", [(n, p) for n in range(3) for p in range(3)])
def test_roundtrip_on_basis(n, p):
    for k in range(1, 5):
        for f in basis_slice(n, p, k).elements:
            g = Form.from_forest(f)
            assert parse_expr(print_form(g)) == g
            assert parse_forest(print_forest(f)) == f


pool = [f for k in range(1, 5) for f in basis_slice(1, 1, k).elements]


@given(st.lists(st.tuples(st.sampled_from(pool), st.fractions(max_denominator=7)), max_size=5))
def test_roundtrip_random_forms(terms):
    g = Form(1, 1, {})
    for f, c in terms:
        g = g + Form(1, 1, {f: c})
    text = print_form(g)
    assert parse_expr(text, 1, 1) == g
    assert print_form(parse_expr(text, 1, 1)) == text


def test_polynomial_parsing():
    poly = parse_polynomial("x2^3 - x1*x2 + 1/2", 2)
    assert poly == {(0, 3): Fraction(1), (1, 1): Fraction(-1), (0, 0): Fraction(1, 2)}
    assert parse_polynomial("(x1 + 1)^2", 1) == {(2,): 1, (1,): 2, (0,): 1}
    assert parse_polynomial(print_polynomial(poly), 2) == poly


def test_field_text():
    dim, comps = parse_field_text("d=2; f1 = x2; f2 = -x1")
    assert dim == 2 and comps == [{(0, 1): 1}, {(1, 0): -1}]
