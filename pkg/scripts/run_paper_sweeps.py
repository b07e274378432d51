#!/usr/bin/env python3
"""Run the full benchmark protocol: the rho sweep and three horizon sweeps.

Produces one summary.csv per panel under --out:

    fig1a/  regret vs rho^(1/3) at fixed T      (gammas 1.0 .. 0.3)
    fig1b/  regret vs T with rho = 1/sqrt(T)    (strong rotting)
    fig1c/  regret vs T with rho = 1/T^(3/5)    (moderate rotting)
    fig1d/  regret vs T with rho = 1/T^(3/2)    (near-stationary)

Full scale (T up to 1e6, 10 repetitions) takes roughly 30-60 minutes on a
2-core machine, dominated by the subsampled-UCB baseline; --reduced scales
horizons down tenfold and finishes in a few minutes.  Feed the CSVs to the
figures tool afterwards:

    python -m regret_figures --panel a --in out/fig1a/summary.csv --out fig1a.png
"""

import argparse
import sys
import time
from pathlib import Path

from rotting_bandits.cli import main as cli_main


def run(argv: list[str]) -> None:
    started = time.perf_counter()
    print(f"$ rotting-bandits {' '.join(argv)}", file=sys.stderr)
    code = cli_main(argv)
    if code != 0:
        sys.exit(code)
    print(f"  done in {time.perf_counter() - started:.0f}s", file=sys.stderr)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out", help="output root directory")
    parser.add_argument("--seed", type=int, default=0, help="base seed")
    parser.add_argument("--reps", type=int, default=10, help="repetitions per cell")
    parser.add_argument("--reduced", action="store_true",
                        help="tenth-scale horizons for a quick pass")
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args()

    scale = 10 if args.reduced else 1
    t_fixed = 1_000_000 // scale
    horizons = [1] + [100_000 * i // scale for i in range(1, 11)]
    out = Path(args.out)

    common = ["--reps", str(args.reps), "--seed", str(args.seed)]
    if args.threads is not None:
        common += ["--threads", str(args.threads)]

    run(["sweep-rho", "--T", str(t_fixed), "--out", str(out / "fig1a")] + common)
    for panel, gamma in (("fig1b", 0.5), ("fig1c", 0.6), ("fig1d", 1.5)):
        run(["sweep-horizon", "--gamma", str(gamma),
             "--Ts", ",".join(str(t) for t in horizons),
             "--out", str(out / panel)] + common)


if __name__ == "__main__":
    main()
