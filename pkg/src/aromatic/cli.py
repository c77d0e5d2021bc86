"""Command-line interface.

Exit codes: 0 success, 1 negative mathematical answer, 2 usage or parse error.
The JSON layout of every subcommand is documented in ``docs/json_schema.md``.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import calculus, linalg, noether
from .calculus import OperatorTag
from .elemdiff import PolyVectorField, elementary_differential, is_zero_value
from .envelope import Series, exact_flow, exp_lie
from .forest import enumerate_forests
from .forms import Form
from .textio import ParseError, format_coefficient, parse_expr, print_form, print_forest, print_polynomial

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ output helpers


def form_json(form: Form) -> dict[str, Any]:
    return {
        "grade": [form.n, form.p],
        "text": print_form(form),
        "terms": [{"forest": print_forest(f), "coefficient": format_coefficient(c)} for f, c in form.items()],
    }


def series_json(series: Series) -> dict[str, Any]:
    return {
        "grade": [series.n, series.p],
        "maxorder": series.maxorder,
        "orders": {str(k): form_json(series[k]) for k in range(1, series.maxorder + 1)},
    }


def _poly_text(poly) -> str:
    return print_polynomial({m: Fraction(int(v.p), int(v.q)) for m, v in poly.terms() if v})


class Output:
    """Collects a text rendering and a JSON payload; prints one of them."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []
        self.data: dict[str, Any] = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def emit(self) -> None:
        if self.fmt == "json":
            print(json.dumps(self.data, indent=2, sort_keys=True))
        elif self.lines:
            print("\n".join(self.lines))


def _read(value: str | None, what: str) -> str:
    if value is None or value == "-":
        if sys.stdin is None or sys.stdin.isatty():
            raise UsageError(f"missing {what} (pass it as a flag or on standard input)")
        value = sys.stdin.read()
    return value.strip()


def _expr(value: str | None, what: str) -> Form:
    return parse_expr(_read(value, what))


def _grade(text: str) -> tuple[int, int]:
    try:
        n, p = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--grade expects 'n,p', got {text!r}") from None
    if n < 0 or p < 0:
        raise UsageError("--grade entries must be non-negative")
    return n, p


# ------------------------------------------------------------------ subcommands


def cmd_enumerate(args, out: Output) -> int:
    forests = enumerate_forests(args.roots, args.covertices, args.order)
    if args.wedge_basis:
        items = linalg.basis_slice(args.roots, args.covertices, args.order).elements
    else:
        items = forests
    texts = [print_forest(f) for f in items]
    out.data = {"roots": args.roots, "covertices": args.covertices, "order": args.order,
                "wedge_basis": args.wedge_basis, "count": len(texts), "forests": texts}
    out.lines.extend(texts)
    out.line(f"# {len(texts)} {'basis elements' if args.wedge_basis else 'forests'}")
    return EXIT_OK


def cmd_apply(args, out: Output) -> int:
    form = _expr(args.expr, "--expr")
    result = calculus.apply_op(OperatorTag(args.op), form)
    if isinstance(result, dict):
        out.data = {"op": args.op, "input": form_json(form),
                    "components": [form_json(f) for _, f in sorted(result.items())]}
        for (n, p), f in sorted(result.items()):
            out.line(f"[{n},{p}] {print_form(f)}")
        if not result:
            out.line("0")
    else:
        out.data = {"op": args.op, "input": form_json(form), "result": form_json(result)}
        out.line(print_form(result))
    return EXIT_OK


def cmd_lie(args, out: Output) -> int:
    tau, gamma = _expr(args.tau, "--tau"), _expr(args.gamma, "--gamma")
    result = calculus.lie(tau, gamma)
    out.data = {"tau": form_json(tau), "gamma": form_json(gamma), "result": form_json(result)}
    out.line(print_form(result))
    return EXIT_OK


def cmd_bracket(args, out: Output) -> int:
    a, b = _expr(args.a, "--a"), _expr(args.b, "--b")
    result = calculus.bracket(a, b)
    out.data = {"a": form_json(a), "b": form_json(b), "result": form_json(result)}
    out.line(print_form(result))
    return EXIT_OK


def _print_series(series: Series, out: Output) -> None:
    for k in range(1, series.maxorder + 1):
        out.line(f"order {k}: {print_form(series[k])}")


def cmd_exp_lie(args, out: Output) -> int:
    tau = _expr(args.tau, "--tau")
    if args.gamma.strip() == "exact-flow":
        gamma: Form | Series = exact_flow(args.order)
    else:
        gamma = parse_expr(args.gamma)
    series = exp_lie(tau, gamma, args.order)
    out.data = {"tau": form_json(tau), "result": series_json(series)}
    _print_series(series, out)
    return EXIT_OK


def cmd_exact_flow(args, out: Output) -> int:
    series = exact_flow(args.order)
    out.data = {"result": series_json(series)}
    _print_series(series, out)
    return EXIT_OK


def cmd_solve_dh(args, out: Output) -> int:
    target = _expr(args.target, "--target")
    witness = linalg.solve_dh(target)
    out.data = {"target": form_json(target), "solvable": witness is not None,
                "witness": None if witness is None else form_json(witness)}
    if witness is None:
        out.line("not in image")
        return EXIT_NEGATIVE
    out.line(print_form(witness))
    return EXIT_OK


def cmd_kernel(args, out: Output) -> int:
    n, p = _grade(args.grade)
    tag = OperatorTag(args.op)
    if tag is OperatorTag.DH and n == 0:
        raise UsageError("d_H is not defined on forms with zero roots")
    basis = linalg.kernel(linalg.operator_matrix(tag, n, p, args.order))
    out.data = {"op": args.op, "grade": [n, p], "order": args.order,
                "dimension": len(basis), "basis": [form_json(f) for f in basis]}
    out.lines.extend(print_form(f) for f in basis)
    out.line(f"# dimension {len(basis)}")
    return EXIT_OK


def cmd_exactness(args, out: Output) -> int:
    reports = linalg.exactness_report(args.max_order, args.max_roots, args.max_covertices)
    ok = all(r.exact for r in reports)
    out.data = {"max_order": args.max_order, "max_roots": args.max_roots,
                "max_covertices": args.max_covertices, "exact": ok, "slots": [r.as_dict() for r in reports]}
    out.line(f"{'kind':<16}{'n':>3}{'p':>3}{'order':>6}{'dim':>6}{'ker':>6}{'img':>6}  exact")
    for r in reports:
        out.line(f"{r.kind:<16}{r.n:>3}{r.p:>3}{r.order:>6}{r.dim:>6}{r.kernel_dim:>6}{r.image_dim:>6}  {r.exact}")
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_solenoidal(args, out: Output) -> int:
    basis = noether.solenoidal_basis(args.order)
    out.data = {"order": args.order, "dimension": len(basis), "basis": [form_json(f) for f in basis]}
    out.lines.extend(print_form(f) for f in basis)
    out.line(f"# dimension {len(basis)}")
    return EXIT_OK


def cmd_classify(args, out: Output) -> int:
    tau, gamma = _expr(args.tau, "--tau"), _expr(args.gamma, "--gamma")
    verdict = noether.classify_symmetry(tau, gamma)
    out.data = {"status": verdict.status.value, "residual": form_json(verdict.residual),
                "witness": None if verdict.witness is None else form_json(verdict.witness)}
    out.line(verdict.status.value)
    out.line(f"L_tau gamma = {print_form(verdict.residual)}")
    if verdict.witness is not None and verdict.status is noether.Status.DIVERGENCE_SYMMETRY:
        out.line(f"witness = {print_form(verdict.witness)}")
    return EXIT_OK if verdict.is_divergence_symmetry else EXIT_NEGATIVE


def cmd_noether(args, out: Output) -> int:
    tau, gamma = _expr(args.tau, "--tau"), _expr(args.lagrangian, "--lagrangian")
    if gamma.grade != (0, 0):
        raise UsageError("the Lagrangian must have no roots and no covertices")
    source, eta_split = noether.first_variational_split(gamma)
    verdict = noether.classify_symmetry(tau, gamma)
    law = noether.conservation_law(tau, gamma)
    out.data = {
        "source": form_json(source),
        "boundary": form_json(eta_split),
        "symmetry": verdict.status.value,
        "conservation_law": None if law is None else form_json(law),
        "consistent": verdict.is_divergence_symmetry == (law is not None),
    }
    out.line(f"delta_V gamma = {print_form(source)}")
    out.line(f"boundary term = {print_form(eta_split)}")
    out.line(f"symmetry: {verdict.status.value}")
    out.line("conservation law: " + ("none" if law is None else print_form(law)))
    return EXIT_OK if law is not None else EXIT_NEGATIVE


def cmd_elemdiff(args, out: Output) -> int:
    gamma = _expr(args.expr, "--expr")
    try:
        with open(args.field, encoding="utf-8") as fh:
            field_text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read field file: {exc}") from None
    f = PolyVectorField.from_text(field_text)
    value = elementary_differential(gamma, f)
    comps = [value] if gamma.n == 0 else list(value)
    texts = [_poly_text(c) for c in comps]
    zero = is_zero_value(value)
    out.data = {"expr": form_json(gamma), "dim": f.dim, "components": texts, "zero": zero}
    out.lines.extend(texts if gamma.n == 0 else [f"F^{i + 1} = {t}" for i, t in enumerate(texts)])
    if args.assert_zero and not zero:
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_worked_examples(args, out: Output) -> int:
    from .regressions import run_all

    results = run_all()
    out.data = {"passed": sum(ok for _, ok, _ in results), "total": len(results),
                "checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in results]}
    width = max(len(n) for n, _, _ in results)
    for name, ok, detail in results:
        out.line(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}".rstrip())
    out.line(f"# {out.data['passed']}/{out.data['total']} passed")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_NEGATIVE


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aromatic", description="Aromatic bicomplex calculator")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    # accepted after the subcommand too; SUPPRESS keeps it from clobbering the top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=fn)
        return p

    p = add("enumerate", cmd_enumerate, "list aromatic forests or a wedge basis")
    p.add_argument("--roots", type=int, required=True)
    p.add_argument("--covertices", type=int, default=0)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--wedge-basis", action="store_true")

    p = add("apply", cmd_apply, "apply an operator to a form")
    p.add_argument("--op", choices=[t.value for t in OperatorTag], required=True)
    p.add_argument("--expr")

    p = add("lie", cmd_lie, "Lie derivative L_tau gamma")
    p.add_argument("--tau", required=True)
    p.add_argument("--gamma")

    p = add("bracket", cmd_bracket, "bracket of two aromatic vector fields")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = add("exp-lie", cmd_exp_lie, "truncated exponential of the Lie derivative")
    p.add_argument("--tau", required=True)
    p.add_argument("--gamma", required=True, help="a form, or 'exact-flow'")
    p.add_argument("--order", type=int, required=True)

    p = add("solve-dh", cmd_solve_dh, "find eta with d_H eta = target")
    p.add_argument("--target")

    p = add("kernel", cmd_kernel, "kernel basis of d_H or d_V on one slot")
    p.add_argument("--grade", required=True, help="n,p")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--op", choices=("dh", "dv"), required=True)

    p = add("exactness", cmd_exactness, "rank table of the bicomplex")
    p.add_argument("--max-order", type=int, required=True)
    p.add_argument("--max-roots", type=int, default=3)
    p.add_argument("--max-covertices", type=int, default=2)

    p = add("solenoidal", cmd_solenoidal, "basis of divergence-free aromatic vector fields")
    p.add_argument("--order", type=int, required=True)

    p = add("noether", cmd_noether, "source form and conservation law of a Lagrangian")
    p.add_argument("--tau", required=True)
    p.add_argument("--lagrangian")

    p = add("classify", cmd_classify, "symmetry / divergence symmetry / neither")
    p.add_argument("--tau", required=True)
    p.add_argument("--gamma")

    p = add("elemdiff", cmd_elemdiff, "elementary differential for a polynomial field")
    p.add_argument("--expr")
    p.add_argument("--field", required=True, help="file in the 'd=2; f1 = ...; f2 = ...' format")
    p.add_argument("--assert-zero", action="store_true")

    p = add("exact-flow", cmd_exact_flow, "B-series of the exact flow")
    p.add_argument("--order", type=int, required=True)

    add("paper-examples", cmd_worked_examples, "run the published worked examples")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.format)
    try:
        code = args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError) as exc:  # grade, capacity and forest errors are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.emit()
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
