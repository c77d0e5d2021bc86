"""Published worked examples as named regression checks.

Each check returns ``True`` on success; ``run_all`` evaluates them and
reports exceptions as failures.
"""
from __future__ import annotations

from typing import Callable

from .calculus import d_h, d_v, graft, interior_euler, lie
from .envelope import exp_coefficients
from .forms import Form
from .linalg import OperatorTag, basis_slice, in_span, kernel, operator_matrix, solve_in_image, span_rank
from .noether import is_solenoidal, solenoidal_basis
from .textio import parse_expr as P

Check = Callable[[], bool]

S3 = "<*[*]> * + <*,*> * - <*> *[*] - *[*,*]"
SOLENOIDAL_ORDER4 = [
    "<*[*[*]]> * + <*[*],*> * + <*,*,*> * - *[*[*,*]] - *[*,*[*]] - <*> *[*[*]]",
    "<*[*,*]> * + 2 <*[*],*> * + *[*[*,*]] - 2 *[*,*[*]] - *[*,*,*] - <*> *[*,*]",
    "<*[*[*]]> * + <*> <*,*> * + <*> <*[*]> * - <*[*]> *[*] - <*> <*> *[*] - <*> *[*,*]",
]
DH_SPAN_UPTO3 = [
    "<*>",
    "<*[*]> + <*,*>",
    "<*[*]> + <*> <*>",
    "<*[*[*]]> + <*[*],*> + <*,*,*>",
    "<*[*,*]> + 2 <*[*],*>",
    "<*[*[*]]> + <*[*]> <*> + <*,*> <*>",
    "<*[*,*]> - <*,*> <*>",
    "<*> <*> <*> + 2 <*[*]> <*>",
]


def _dh_image_span_ok() -> bool:
    for order, dim in ((1, 1), (2, 2), (3, 5)):
        m = operator_matrix(OperatorTag.DH, 1, 0, order)
        if m.rank() != dim:
            return False
        listed = [P(e) for e in DH_SPAN_UPTO3 if P(e).orders() == [order]]
        target = basis_slice(0, 0, order)
        if span_rank(listed, target) != dim:
            return False
        if any(solve_in_image(m, f) is None for f in listed):
            return False
    return True


def _order3_exp_coefficient(tau: Form, gamma: Form) -> bool:
    L = lambda t, g: lie(t, g)  # noqa: E731
    lt_t = L(tau, tau)
    expected = (L(tau, L(tau, L(tau, gamma)))
                - 2 * L(tau, L(lt_t, gamma))
                - L(lt_t, L(tau, gamma))
                + L(L(lt_t, tau), gamma)
                + L(L(tau, lt_t), gamma)) / 6
    second = (L(tau, L(tau, gamma)) - L(lt_t, gamma)) / 2
    coeffs = exp_coefficients(tau, gamma, 3)
    return coeffs[1] == L(tau, gamma) and coeffs[2] == second and coeffs[3] == expected


def _f_symmetry_ok() -> bool:
    from .elemdiff import f_symmetry_check, sample_divfree

    tau = P("<*,*> * - *[*,*]")
    return all(f_symmetry_check(tau, P("<*>"), sample_divfree(d, 2, seed)) for d in (2, 3) for seed in (0, 1))


CHECKS: dict[str, Check] = {
    "d_H of the vertex is the 1-loop": lambda: d_h(P("*")) == P("<*>"),
    "d_H of the wedged two-root forest": lambda: d_h(P("* *[*]")) == P("<*[*]> * + <*,*> * - <*> *[*] - *[*,*]") / 2,
    "d_H of the wedged vertex/covertex pair": lambda: d_h(P("* o1")) == P("<o1> * + *[o1] - <*> o1 - o1[*]") / 2,
    "d_V of the vertex": lambda: d_v(P("*")) == P("o1"),
    "d_V of the wedged two-root forest": lambda: d_v(P("* *[*]")) == P("o1 *[*]") + P("* o1[*]") + P("* *[o1]"),
    "d_V of the wedged vertex/covertex pair": lambda: d_v(P("* o1")) == P("o2 o1"),
    "wedge of <o1,o2> vanishes": lambda: not P("<o1,o2>"),
    "wedge of the swapped two-root forest changes sign": lambda: P("*[*] *") == -P("* *[*]"),
    "I <o1> = 0": lambda: not interior_euler(P("<o1>")),
    "I <*[o1]> = <*[o1]>": lambda: interior_euler(P("<*[o1]>")) == P("<*[o1]>"),
    "I <o1[*]> = <*[o1]>": lambda: interior_euler(P("<o1[*]>")) == P("<*[o1]>"),
    "I <*,o1> = -<*[o1]>": lambda: interior_euler(P("<*,o1>")) == -P("<*[o1]>"),
    "I <*> <o1> = -<*[o1]>": lambda: interior_euler(P("<*> <o1>")) == -P("<*[o1]>"),
    "L_bullet scales by the order": lambda: lie(P("*"), P("<*[*]>")) == 2 * P("<*[*]>"),
    "free generation of the 2-cycle": lambda: d_h(graft(P("*"), P("*"))) - graft(P("*"), d_h(P("*"))) == P("<*,*>"),
    "first solenoidal form is d_H-closed": lambda: is_solenoidal(P(S3)) and P(S3) == 2 * d_h(P("* *[*]")),
    "order-4 solenoidal forms": lambda: all(
        is_solenoidal(P(e)) and in_span(P(e), solenoidal_basis(4), basis_slice(1, 0, 4)) for e in SOLENOIDAL_ORDER4
    ) and P(SOLENOIDAL_ORDER4[0]) == 2 * d_h(P("* *[*[*]]")) and P(SOLENOIDAL_ORDER4[1]) == 2 * d_h(P("* *[*,*]"))
    and P(SOLENOIDAL_ORDER4[2]) == 2 * d_h(P("<*> * *[*]")),
    "order-3 solenoidal space is spanned by s3": lambda: len(kernel(operator_matrix(OperatorTag.DH, 1, 0, 3))) == 1
    and in_span(P(S3), solenoidal_basis(3), basis_slice(1, 0, 3)),
    "spanning set of d_H(Omega_1) up to order 3": _dh_image_span_ok,
    "f-symmetry example for divergence-free fields": _f_symmetry_ok,
    "exp expansion up to eps^3 (tau = *[*], gamma = *)": lambda: _order3_exp_coefficient(P("*[*]"), P("*")),
    "exp expansion up to eps^3 (tau = <*> *, gamma = *[*])": lambda: _order3_exp_coefficient(P("<*> *"), P("*[*]")),
    "L_1 is the identity": lambda: exp_coefficients(P("*[*]"), P("<*>"), 0)[0] == P("<*>"),
}


def run_all() -> list[tuple[str, bool, str]]:
    """``(name, passed, detail)`` for every check."""
    out = []
    for name, check in CHECKS.items():
        try:
            ok = bool(check())
            out.append((name, ok, ""))
        except Exception as exc:  # reported, not raised
            out.append((name, False, f"{type(exc).__name__}: {exc}"))
    return out


__all__ = ["CHECKS", "run_all", "S3", "SOLENOIDAL_ORDER4", "DH_SPAN_UPTO3"]
