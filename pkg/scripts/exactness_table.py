"""Rank table of the aromatic bicomplex, written as CSV."""
from __future__ import annotations

import csv
import sys
import time
from dataclasses import dataclass

from _config import parse_config

from aromatic.linalg import exactness_report


@dataclass
class ExactnessConfig:
    max_order: int = 5
    max_roots: int = 3
    max_covertices: int = 2
    output: str = "-"


def main(cfg: ExactnessConfig) -> int:
    t0 = time.time()
    reports = exactness_report(cfg.max_order, cfg.max_roots, cfg.max_covertices)
    fh = sys.stdout if cfg.output == "-" else open(cfg.output, "w", newline="")
    writer = csv.DictWriter(fh, fieldnames=list(reports[0].as_dict()))
    writer.writeheader()
    for r in reports:
        writer.writerow(r.as_dict())
    if fh is not sys.stdout:
        fh.close()
    bad = sum(not r.exact for r in reports)
    print(f"{len(reports)} slots, {bad} not exact, {time.time() - t0:.1f}s", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(parse_config(ExactnessConfig, __doc__)))
