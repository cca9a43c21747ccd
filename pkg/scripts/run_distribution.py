"""Run the distance-to-optimum experiment and print averages, variances and fitted peaks.

    python scripts/run_distribution.py --seed 0 --out-dir results
"""

import argparse
import logging
from pathlib import Path

from xover.distance import KStarPolicy
from xover.experiment import (ExperimentConfig, atomic_write, fit_gaussian, histogram, histogram_csv,
                              results_csv, run_distribution, summary_csv)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--kstar", default="log")
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out-dir", type=Path, default=None)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    config = ExperimentConfig(seed=args.seed, samples=args.samples, kstar=KStarPolicy.parse(args.kstar))
    results = run_distribution(config, args.workers)
    print(f"{'n':>2} {'k*':>3} {'average':>8} {'variance':>8} {'peak':>8} {'center':>7} {'sigma':>6} {'unreach':>7}")
    for r in results:
        avg, var = r.summary
        fit = fit_gaussian(histogram(r.values()))
        print(f"{r.n:>2} {r.kstar:>3} {avg:8.4f} {var:8.4f} {fit.peak:8.3f} {fit.center:7.3f} {fit.sigma:6.3f} "
              f"{r.unreachable_fraction:7.3f}")
    if args.out_dir is not None:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        atomic_write(args.out_dir / "results.csv", results_csv(results))
        atomic_write(args.out_dir / "summary.csv", summary_csv(results))
        atomic_write(args.out_dir / "histogram.csv", histogram_csv(results))


if __name__ == "__main__":
    main()
