from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from aromatic.calculus import OperatorTag, apply_op, d_h, delta_v
from aromatic.linalg import (
    ExactnessError,
    basis_slice,
    compose,
    exactness_report,
    image_basis,
    in_span,
    kernel,
    operator_matrix,
    solve_dh,
    solve_in_image,
    source_basis,
    span_rank,
)
from aromatic.forms import Form, GradeError
from aromatic.textio import parse_expr as P
from aromatic.textio import parse_forest

S3 = P("<*[*]> * + <*,*> * - <*> *[*] - *[*,*]")

SLICES = [(OperatorTag.DH, n, p, k) for n in (1, 2, 3) for p in (0, 1, 2) for k in range(1, 5) if n <= k]
SLICES += [(OperatorTag.DV, n, p, k) for n in (0, 1, 2) for p in (0, 1) for k in range(1, 5)]
SLICES += [(OperatorTag.INTERIOR_EULER, 0, p, k) for p in (1, 2) for k in range(1, 5)]
SLICES += [(OperatorTag.DH, 1, 0, 5), (OperatorTag.DH, 2, 0, 5), (OperatorTag.DV, 0, 0, 5)]


def _sympy_rank(m):
    return sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in row] for row in m.dense()]).rank() \
        if m.shape[0] and m.shape[1] else 0


def test_dh_order_one_matrix():
    m = operator_matrix(OperatorTag.DH, 1, 0, 1)
    assert m.shape == (1, 1)
    assert m.dense() == [[Fraction(1)]]


def test_dh_order_two_matrix():
    m = operator_matrix(OperatorTag.DH, 1, 0, 2)
    assert set(m.domain.elements) == {parse_forest("*[*]"), parse_forest("* <*>")}
    assert len(m.codomain) == 3
    assert m.rank() == 2


@pytest.mark.parametrize("n,p,k", [(0, 0, 3), (1, 0, 3), (1, 1, 3), (2, 0, 4)])
def test_dv_squared_is_zero_matrix(n, p, k):
    inner = operator_matrix(OperatorTag.DV, n, p, k)
    outer = operator_matrix(OperatorTag.DV, n, p + 1, k)
    assert compose(outer, inner).is_zero()


@pytest.mark.parametrize("op,n,p,k", SLICES, ids=lambda x: getattr(x, "value", x))
def test_rank_nullity_and_sympy_rank(op, n, p, k):
    m = operator_matrix(op, n, p, k)
    ker = kernel(m)
    r = m.rank()
    assert len(m.domain) == r + len(ker)
    assert r == _sympy_rank(m)
    for v in ker:
        assert not apply_op(op, v)
    assert len(image_basis(m)) == r


def test_kernel_examples():
    assert kernel(operator_matrix(OperatorTag.DH, 1, 0, 1)) == []
    ker3 = kernel(operator_matrix(OperatorTag.DH, 1, 0, 3))
    assert len(ker3) == 1
    assert in_span(S3, ker3, basis_slice(1, 0, 3))


def test_kernel_is_deterministic():
    a = kernel(operator_matrix(OperatorTag.DH, 1, 0, 4))
    operator_matrix.cache_clear()
    b = kernel(operator_matrix(OperatorTag.DH, 1, 0, 4))
    assert [str(x) for x in a] == [str(x) for x in b]


def test_solve_examples():
    assert solve_dh(P("<*>")) == P("*")
    assert solve_dh(P("<*[*]>")) is None
    assert solve_dh(P("<*[*]> + <*,*>")) == P("*[*]")


def test_solve_mixed_orders():
    target = d_h(P("*[*] + <*> *[*,*] - *[*[*]]"))
    eta = solve_dh(target)
    assert eta is not None and d_h(eta) == target


images = [(n, p, k) for n in (1, 2) for p in (0, 1) for k in range(2, 5) if n <= k]


@st.composite
def image_targets(draw):
    n, p, k = draw(st.sampled_from(images))
    dom = basis_slice(n, p, k)
    coeffs = draw(st.lists(st.integers(-2, 2), min_size=len(dom), max_size=len(dom)))
    source = Form(n, p, {f: Fraction(c) for f, c in zip(dom.elements, coeffs)})
    return d_h(source)


@given(image_targets())
def test_solve_reproduces_target(target):
    eta = solve_dh(target)
    assert eta is not None
    assert d_h(eta) == target


def test_solve_in_image_returns_none_off_image():
    m = operator_matrix(OperatorTag.DV, 0, 0, 2)
    assert solve_in_image(m, P("<o1[*]>")) is None
    assert solve_in_image(m, P("<o1[*]> + <*[o1]>")) == P("<*[*]>")


def test_lagrangian_image_dimensions():
    assert [operator_matrix(OperatorTag.DH, 1, 0, k).rank() for k in (1, 2, 3)] == [1, 2, 5]


def test_vertical_exactness_at_one_root_one_covertex():
    for k in range(1, 5):
        ker = len(kernel(operator_matrix(OperatorTag.DV, 1, 1, k)))
        assert ker == operator_matrix(OperatorTag.DV, 1, 0, k).rank()


def test_solenoidal_dimension_matches_image_from_two_roots():
    for k in range(2, 6):
        ker = len(kernel(operator_matrix(OperatorTag.DH, 1, 0, k)))
        assert ker == operator_matrix(OperatorTag.DH, 2, 0, k).rank()


def test_exactness_report_small():
    reports = exactness_report(3, 2, 1, raise_on_failure=True)
    assert reports and all(r.exact for r in reports)
    kinds = {r.kind for r in reports}
    assert kinds == {"horizontal", "augmented", "euler-lagrange", "vertical", "source"}
    d = reports[0].as_dict()
    assert set(d) == {"kind", "n", "p", "order", "dim", "kernel_dim", "image_dim", "exact"}


def test_exactness_error_is_raised_for_a_broken_slot(monkeypatch):
    import aromatic.linalg as la

    real = la._dh

    def broken(n, p, order):
        m = real(n, p, order)
        if (n, p, order) == (2, 0, 3):
            return la.GradedMatrix(m.domain, m.codomain, [{} for _ in m.columns])
        return m

    monkeypatch.setattr(la, "_dh", broken)
    with pytest.raises(ExactnessError):
        exactness_report(3, 2, 0, raise_on_failure=True)


def test_source_basis_is_fixed_by_euler_operator():
    from aromatic.calculus import interior_euler

    for p in (1, 2):
        for k in range(1, 4):
            for s in source_basis(p, k):
                assert interior_euler(s) == s


def test_span_rank_and_grade_checks():
    sl = basis_slice(0, 0, 2)
    forms = [P("<*[*]> + <*,*>"), P("<*[*]> + <*> <*>"), P("<*,*> - <*> <*>")]
    assert span_rank(forms, sl) == 2
    with pytest.raises(GradeError):
        sl.coordinates(P("<*>"))
    with pytest.raises(GradeError):
        operator_matrix(OperatorTag.DH, 0, 0, 2)
    with pytest.raises(GradeError):
        operator_matrix(OperatorTag.INTERIOR_EULER, 1, 1, 2)


def test_variational_kernel_equals_divergences():
    for k in range(1, 5):
        dh = operator_matrix(OperatorTag.DH, 1, 0, k)
        dv = operator_matrix(OperatorTag.DELTA_V, 0, 0, k)
        ker = kernel(dv)
        img = image_basis(dh)
        sl = basis_slice(0, 0, k)
        assert len(ker) == len(img)
        assert all(in_span(v, img, sl) for v in ker)
        assert all(not delta_v(v) for v in img)
