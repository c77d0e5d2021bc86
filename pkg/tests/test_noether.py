import itertools

import pytest

from aromatic.calculus import OperatorTag, contract, d_h, d_v, delta_v, lie
from aromatic.envelope import exact_flow, exp_coefficients
from aromatic.forest import enumerate_forests
from aromatic.forms import Form, GradeError
from aromatic.linalg import basis_slice, image_basis, in_span, operator_matrix
from aromatic.noether import (
    PreconditionError,
    Status,
    bracket_propagation_check,
    classify_symmetry,
    conservation_law,
    first_variational_split,
    is_solenoidal,
    lie_minus_source,
    modified_measure_check,
    noether_equivalence_check,
    solenoidal_basis,
    divergence_symmetry_descends_check,
    vp_modified_field,
)
from aromatic.textio import parse_expr as P

S3 = P("<*[*]> * + <*,*> * - <*> *[*] - *[*,*]")


def trees(maxorder):
    return [Form.from_forest(f) for k in range(1, maxorder + 1) for f in enumerate_forests(1, 0, k)]


def lagrangians(maxorder):
    return [Form.from_forest(f) for k in range(1, maxorder + 1) for f in basis_slice(0, 0, k).elements]


def divergences(maxorder):
    return [g for k in range(1, maxorder + 1) for g in image_basis(operator_matrix(OperatorTag.DH, 1, 0, k))]


def test_classify_examples():
    assert classify_symmetry(P("*"), P("<*[*]>")).status is Status.NEITHER
    v = classify_symmetry(P("*"), P("<*[*]> + <*,*>"))
    assert v.status is Status.DIVERGENCE_SYMMETRY
    assert d_h(v.witness) == d_h(2 * P("*[*]"))
    sym = classify_symmetry(S3, P("<*>"))
    assert sym.status is Status.SYMMETRY and sym.is_divergence_symmetry


def test_divergences_are_always_divergence_symmetries():
    for tau in trees(3):
        for g in divergences(3):
            assert classify_symmetry(tau, g).is_divergence_symmetry


def test_solenoidal_predicate():
    assert not is_solenoidal(P("*"))
    assert is_solenoidal(S3)
    for g in basis_slice(2, 0, 4).elements:
        assert is_solenoidal(d_h(Form.from_forest(g)))
    with pytest.raises(GradeError):
        is_solenoidal(P("<*>"))


def test_solenoidal_bases():
    assert solenoidal_basis(1) == [] and solenoidal_basis(2) == []
    b3 = solenoidal_basis(3)
    assert len(b3) == 1 and in_span(S3, b3, basis_slice(1, 0, 3))
    b4 = solenoidal_basis(4)
    for src in ("* *[*[*]]", "* *[*,*]", "<*> * *[*]"):
        assert in_span(2 * d_h(P(src)), b4, basis_slice(1, 0, 4))


def test_first_variational_split_examples():
    src, eta = first_variational_split(P("<*>"))
    assert not src and d_h(eta) == d_h(P("o1"))
    src, eta = first_variational_split(P("<*[*]>"))
    assert src == 2 * P("<*[o1]>")
    assert d_h(eta) == P("<o1[*]> - <*[o1]>")
    src, _ = first_variational_split(P("<*[*]> + <*,*>"))
    assert not src


def test_first_variational_split_sweep():
    for g in lagrangians(4):
        src, eta = first_variational_split(g)
        assert d_v(g) == src + d_h(eta)


def test_conservation_law_examples():
    for tau in trees(2):
        assert conservation_law(tau, P("<*>")) == 0
    assert conservation_law(P("*"), P("<*[*]>")) is None
    assert conservation_law(P("*"), P("<*[*]> + <*,*>")) is not None


def _fields():
    base = trees(2)
    out = list(base)
    for signs in itertools.product((-1, 0, 1), repeat=len(base)):
        if sum(map(abs, signs)) >= 2:
            out.append(sum((t * s for t, s in zip(base, signs)), Form(1, 0)))
    return out


def test_noether_equivalence_sweep():
    gammas = lagrangians(3) + divergences(3)
    for tau in _fields():
        for g in gammas:
            assert noether_equivalence_check(tau, g)
            law = conservation_law(tau, g)
            if law is not None:
                assert d_h(law) == contract(tau, delta_v(g))


def test_equivalence_examples():
    assert noether_equivalence_check(P("*"), P("<*[*]>"))
    assert noether_equivalence_check(P("*[*]"), P("<*>"))


def test_bracket_propagation():
    assert bracket_propagation_check(P("*"), P("*[*]"), d_h(P("*[*]")))
    t = P("*[*]")
    assert bracket_propagation_check(t, t, d_h(P("*[*]")))
    for g in divergences(3):
        for t1, t2 in itertools.product(trees(2), repeat=2):
            assert bracket_propagation_check(t1, t2, g)
    with pytest.raises(PreconditionError):
        bracket_propagation_check(P("*"), P("*[*]"), P("<*[*]>"))


def test_symmetry_bracket_correspondence():
    # S3 is a symmetry of the 1-loop; check the stronger clause of the propagation check
    for t2 in trees(3):
        assert bracket_propagation_check(S3, t2, P("<*>"))


def test_modified_field_trivial():
    field, div = vp_modified_field(Form(1, 0), 4)
    flow = exact_flow(4)
    assert all(field[k] == flow[k] for k in range(1, 5))
    assert div[1] == P("<*>")


def test_modified_field_first_order():
    field, div = vp_modified_field(S3, 4)
    flow = exact_flow(4)
    first = lie(S3, flow.to_form())
    for k in range(1, 5):
        assert field[k] == flow[k] + first.homogeneous(k)
        assert div[k] == d_h(field[k])


def test_modified_field_second_order():
    field, _ = vp_modified_field(S3, 5)
    flow = exact_flow(5).to_form()
    c = exp_coefficients(S3, flow, 2, maxorder=5)
    second = (lie(S3, lie(S3, flow)) - lie(lie(S3, S3), flow)) / 2
    assert c[2] == second.truncate(5)
    assert field[5] == (flow + lie(S3, flow) + second).homogeneous(5)


def test_modified_field_rejects_non_solenoidal():
    with pytest.raises(ValueError, match="order 2"):
        vp_modified_field(P("*[*]"), 3)


def test_modified_measure_examples():
    assert modified_measure_check(Form(0, 0), S3)
    assert not modified_measure_check(Form(0, 0), P("*"))
    assert not modified_measure_check(P("<*>"), P("*"))
    assert modified_measure_check(Form(0, 0), P("*"), maxorder=0)


def test_divergence_symmetry_descends_examples():
    assert divergence_symmetry_descends_check(P("* *[*]"), P("*"))
    assert divergence_symmetry_descends_check(P("* *[*]"), S3)


def test_divergence_symmetry_descends_sweep():
    # Omega_3 vanishes below order 6, so exactness makes d_H injective on these Omega_2 slices and
    # the hypothesis can only hold when L_tau gamma_hat = 0; the sweep checks it is never violated
    hats = [Form.from_forest(g) for k in range(2, 5) for g in basis_slice(2, 0, k).elements]
    hats += [a - b for a, b in itertools.combinations(hats, 2)]
    for g in hats:
        for tau in trees(2) + [S3, Form(1, 0)]:
            assert divergence_symmetry_descends_check(g, tau)


def test_lie_minus_source_is_exact():
    for g in lagrangians(4):
        for tau in trees(2):
            eta = lie_minus_source(tau, g)
            assert eta is not None
            assert d_h(eta) == lie(tau, g) - contract(tau, delta_v(g))
