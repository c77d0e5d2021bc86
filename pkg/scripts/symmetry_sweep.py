"""Classify every (tree, Lagrangian) pair and cross-check the Noether correspondence.

Also counts symmetries and divergence symmetries whose tree is not solenoidal; the sweep only
reports the count.
"""
from __future__ import annotations

import collections
import sys
from dataclasses import dataclass

from _config import parse_config

from aromatic.forest import enumerate_forests
from aromatic.forms import Form
from aromatic.linalg import basis_slice
from aromatic.noether import classify_symmetry, conservation_law, is_solenoidal


@dataclass
class SweepConfig:
    max_tree_order: int = 2
    max_lagrangian_order: int = 3


def main(cfg: SweepConfig) -> int:
    trees = [Form.from_forest(t) for k in range(1, cfg.max_tree_order + 1) for t in enumerate_forests(1, 0, k)]
    lags = [Form.from_forest(g) for k in range(1, cfg.max_lagrangian_order + 1)
            for g in basis_slice(0, 0, k).elements]
    counts: collections.Counter = collections.Counter()
    mismatches = 0
    for tau in trees:
        for g in lags:
            verdict = classify_symmetry(tau, g)
            counts[verdict.status.value] += 1
            if verdict.is_divergence_symmetry != (conservation_law(tau, g) is not None):
                mismatches += 1
            if verdict.is_divergence_symmetry and not is_solenoidal(tau):
                counts[f"{verdict.status.value}, tree not solenoidal"] += 1
    for key, value in sorted(counts.items()):
        print(f"{key:<40}{value:>6}")
    print(f"{'correspondence mismatches':<40}{mismatches:>6}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main(parse_config(SweepConfig, __doc__)))
