"""Dimensions and bases of divergence-free aromatic vector fields per order."""
from __future__ import annotations

import sys
from dataclasses import dataclass

from _config import parse_config

from aromatic.calculus import OperatorTag
from aromatic.linalg import basis_slice, operator_matrix
from aromatic.noether import solenoidal_basis
from aromatic.textio import print_form


@dataclass
class CensusConfig:
    max_order: int = 5
    show_bases: bool = False


def main(cfg: CensusConfig) -> int:
    print(f"{'order':>5} {'dim Omega_1':>12} {'dim Omega_0':>12} {'rank d_H':>9} {'solenoidal':>11}")
    for k in range(1, cfg.max_order + 1):
        basis = solenoidal_basis(k)
        rank = operator_matrix(OperatorTag.DH, 1, 0, k).rank()
        print(f"{k:>5} {len(basis_slice(1, 0, k)):>12} {len(basis_slice(0, 0, k)):>12} {rank:>9} {len(basis):>11}")
        if cfg.show_bases:
            for form in basis:
                print("      " + print_form(form))
    return 0


if __name__ == "__main__":
    sys.exit(main(parse_config(CensusConfig, __doc__)))
