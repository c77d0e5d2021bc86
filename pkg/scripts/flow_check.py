"""Compare the exact-flow series with Taylor coefficients for random polynomial fields."""
from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from _config import parse_config

from aromatic.elemdiff import sample_field, series_values, taylor_oracle
from aromatic.envelope import exact_flow


@dataclass
class FlowConfig:
    order: int = 4
    trials: int = 5
    dim: int = 2
    degree: int = 2
    seed: int = 0


def main(cfg: FlowConfig) -> int:
    rng = random.Random(cfg.seed)
    flow = exact_flow(cfg.order)
    failures = 0
    for trial in range(cfg.trials):
        f = sample_field(cfg.dim, cfg.degree, rng.randrange(10**6))
        y0 = [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(cfg.dim)]
        ok = series_values(flow, f, y0) == taylor_oracle(f, y0, cfg.order)
        failures += not ok
        print(f"trial {trial}: {'match' if ok else 'MISMATCH'}  {f.to_text()}  y0={[str(y) for y in y0]}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(parse_config(FlowConfig, __doc__)))
