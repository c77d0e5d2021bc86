"""Symmetries, conservation laws and the volume-preservation pipeline.

Witnesses returned here are solver outputs: any element of ``Ker d_H`` may
be added to them, so they are compared through their ``d_H`` images.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .calculus import bracket, contract, d_h, d_v, delta_v, lie
from .envelope import Series, exact_flow, exp_lie
from .forms import Form, GradeError, concat
from .linalg import OperatorTag, kernel, operator_matrix, solve_dh


class Status(enum.Enum):
    SYMMETRY = "symmetry"
    DIVERGENCE_SYMMETRY = "divergence-symmetry"
    NEITHER = "neither"


@dataclass
class SymmetryVerdict:
    status: Status
    residual: Form
    witness: Form | None = None

    @property
    def is_divergence_symmetry(self) -> bool:
        return self.status is not Status.NEITHER


def classify_symmetry(tau: Form, gamma: Form) -> SymmetryVerdict:
    """Is ``L_tau gamma`` zero, ``d_H``-exact, or neither?"""
    residual = lie(tau, gamma)
    if not residual:
        return SymmetryVerdict(Status.SYMMETRY, residual, Form(gamma.n + 1, gamma.p))
    witness = solve_dh(residual)
    if witness is None:
        return SymmetryVerdict(Status.NEITHER, residual)
    return SymmetryVerdict(Status.DIVERGENCE_SYMMETRY, residual, witness)


def is_solenoidal(tau: Form) -> bool:
    if tau.grade != (1, 0):
        raise GradeError("solenoidal forms live in Omega_1")
    return not d_h(tau)


def solenoidal_basis(order: int) -> list[Form]:
    """Basis of ``Ker(d_H | Omega_1)`` at one order, each checked to be ``d_H`` of an Omega_2 form."""
    basis = kernel(operator_matrix(OperatorTag.DH, 1, 0, order))
    for form in basis:
        if solve_dh(form, order) is None:
            raise ArithmeticError(f"solenoidal form {form} has no Omega_2 preimage")
    return basis


def first_variational_split(gamma: Form) -> tuple[Form, Form]:
    """``(delta_V gamma, eta)`` with ``d_V gamma = delta_V gamma + d_H eta``."""
    if gamma.grade != (0, 0):
        raise GradeError("the first variational formula is stated for Lagrangians in Omega_0")
    source = delta_v(gamma)
    rest = d_v(gamma) - source
    eta = solve_dh(rest) if rest else Form(1, 1)
    if eta is None:
        raise ArithmeticError("d_V gamma - delta_V gamma is not d_H-exact; the bicomplex is inconsistent")
    return source, eta


def conservation_law(tau: Form, gamma: Form) -> Form | None:
    """``eta`` with ``i_tau delta_V gamma = d_H eta`` if one exists."""
    target = contract(tau, delta_v(gamma))
    if not target:
        return Form(1, 0)
    return solve_dh(target)


def noether_equivalence_check(tau: Form, gamma: Form) -> bool:
    """Divergence symmetry of ``gamma`` iff conservation law for ``delta_V gamma``."""
    return classify_symmetry(tau, gamma).is_divergence_symmetry == (conservation_law(tau, gamma) is not None)


class PreconditionError(ValueError):
    pass


def bracket_propagation_check(tau1: Form, tau2: Form, gamma: Form) -> bool:
    """Brackets with a divergence symmetry stay divergence symmetries.

    When ``tau1`` is a symmetry, also checks that ``tau1`` is a symmetry of
    ``L_tau2 gamma`` exactly when ``[[tau1, tau2]]`` is a symmetry of ``gamma``.
    """
    verdict = classify_symmetry(tau1, gamma)
    if not verdict.is_divergence_symmetry:
        raise PreconditionError("tau1 is not a divergence symmetry of gamma")
    br = bracket(tau1, tau2)
    ok = classify_symmetry(br, gamma).is_divergence_symmetry
    if verdict.status is Status.SYMMETRY:
        left = not lie(tau1, lie(tau2, gamma))
        right = not lie(br, gamma)
        ok = ok and left == right
    return ok


def _series_orders(tau: Form | Series) -> Form:
    return tau.to_form() if isinstance(tau, Series) else tau


def vp_modified_field(tau: Form | Series, maxorder: int) -> tuple[Series, dict[int, Form]]:
    """``L_{exp(tau)}`` of the exact flow, with ``d_H`` of each order as diagnostic."""
    tau_f = _series_orders(tau)
    for k in tau_f.orders():
        if not is_solenoidal(tau_f.homogeneous(k)):
            raise ValueError(f"component of order {k} is not solenoidal")
    flow = exact_flow(maxorder)
    field = exp_lie(tau_f, flow, maxorder) if tau_f else flow
    divergence = {k: d_h(field[k]) for k in range(1, maxorder + 1)}
    return field, divergence


def modified_measure_check(mu: Form, tau: Form, maxorder: int | None = None) -> bool:
    """Is ``(1 + mu) tau`` solenoidal (up to ``maxorder``)?"""
    total = tau + concat(mu, tau)
    div = d_h(total)
    if maxorder is not None:
        div = div.truncate(maxorder)
    return not div


def divergence_symmetry_descends_check(gamma_hat: Form, tau: Form) -> bool:
    """A divergence symmetry of ``gamma_hat`` is a symmetry of ``d_H gamma_hat``."""
    if gamma_hat.grade != (2, 0):
        raise GradeError("gamma_hat must lie in Omega_2")
    residual = lie(tau, gamma_hat)
    if residual and solve_dh(residual) is None:
        return True
    return not lie(tau, d_h(gamma_hat))


def lie_minus_source(tau: Form, gamma: Form) -> Form | None:
    """Witness ``eta`` with ``L_tau gamma - i_tau delta_V gamma = d_H eta``."""
    target = lie(tau, gamma) - contract(tau, delta_v(gamma))
    if not target:
        return Form(1, 0)
    return solve_dh(target)


__all__ = [
    "Status",
    "SymmetryVerdict",
    "classify_symmetry",
    "is_solenoidal",
    "solenoidal_basis",
    "first_variational_split",
    "conservation_law",
    "noether_equivalence_check",
    "bracket_propagation_check",
    "vp_modified_field",
    "modified_measure_check",
    "divergence_symmetry_descends_check",
    "lie_minus_source",
    "PreconditionError",
]
