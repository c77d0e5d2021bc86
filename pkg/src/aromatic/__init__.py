"""Computer algebra for aromatic forests, forms and the aromatic bicomplex."""
from .calculus import (
    OperatorTag,
    bracket,
    contract,
    d_h,
    d_total,
    d_v,
    delta_v,
    graft,
    interior_euler,
    lie,
    lie_cartan,
)
from .envelope import Series, exact_flow, exp_coefficients, exp_lie
from .forest import CapacityError, Forest, ForestError, enumerate_forests, permute
from .forms import Form, GradeError, concat, wedge
from .linalg import basis_slice, exactness_report, kernel, operator_matrix, solve_dh
from .noether import classify_symmetry, conservation_law, first_variational_split, solenoidal_basis
from .textio import ParseError, parse_expr, parse_forest, print_form, print_forest

__all__ = [
    "OperatorTag", "bracket", "contract", "d_h", "d_total", "d_v", "delta_v", "graft", "interior_euler",
    "lie", "lie_cartan", "Series", "exact_flow", "exp_coefficients", "exp_lie", "CapacityError", "Forest",
    "ForestError", "enumerate_forests", "permute", "Form", "GradeError", "concat", "wedge", "basis_slice",
    "exactness_report", "kernel", "operator_matrix", "solve_dh", "classify_symmetry", "conservation_law",
    "first_variational_split", "solenoidal_basis", "ParseError", "parse_expr", "parse_forest", "print_form",
    "print_forest",
]
