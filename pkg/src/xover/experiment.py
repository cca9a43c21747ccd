"""Distance-to-optimum distributions over random populations.

For every genome ``x`` of length ``length`` we draw ``samples`` random
populations of ``pop_size`` genomes, add ``x``, and average the directed
distance to the one-member population ``{target}``.
"""

from __future__ import annotations

import csv
import io
import logging
import os
import tempfile
import warnings
from dataclasses import asdict, dataclass, field
from itertools import product
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from .distance import KStarPolicy, directed_distance, resolve_kstar
from .genome import BINARY, Alphabet, Genome, GenomeError
from .oracle import Semantics

log = logging.getLogger(__name__)

BIN_WIDTH = 0.05


@dataclass(frozen=True)
class ExperimentConfig:
    length: int = 8
    n_values: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7)
    samples: int = 100
    pop_size: int = 4
    target: str = "11111111"
    seed: int = 0
    kstar: KStarPolicy = field(default_factory=KStarPolicy)
    semantics: Semantics = Semantics.CONTAINMENT
    alphabet: Alphabet = BINARY
    width: int | None = None

    def __post_init__(self):
        if self.length < 2:
            raise GenomeError("experiment needs genomes of length at least 2")
        if len(self.target) != self.length:
            raise GenomeError(f"target {self.target!r} does not have length {self.length}")
        self.alphabet.parse(self.target)
        if not self.n_values or any(not 1 <= n < self.length for n in self.n_values):
            raise GenomeError(f"crossover points must lie in [1, {self.length - 1}]")
        if self.samples < 1 or self.pop_size < 0:
            raise GenomeError("samples must be positive and pop_size non-negative")
        if not 0 <= self.seed < 2**64:
            raise GenomeError("seed must be a 64-bit unsigned integer")
        if self.alphabet.size ** self.length > 2**20:
            raise GenomeError("universe too large to enumerate every individual")

    @property
    def target_genome(self) -> Genome:
        return self.alphabet.parse(self.target)

    def describe(self) -> dict:
        d = asdict(self)
        d["n_values"] = list(self.n_values)
        d["kstar"] = str(self.kstar)
        d["semantics"] = self.semantics.value
        d["alphabet"] = "".join(self.alphabet.symbols)
        return d


@dataclass
class DistributionResult:
    n: int
    kstar: int
    config: ExperimentConfig
    per_individual: dict[Genome, float]
    unreachable: dict[Genome, float]

    @property
    def summary(self) -> tuple[float, float]:
        return summarize(self)

    @property
    def unreachable_fraction(self) -> float:
        return float(np.mean(list(self.unreachable.values())))

    def values(self) -> np.ndarray:
        return np.array([self.per_individual[g] for g in sorted(self.per_individual)])


def all_genomes(length: int, q: int) -> list[Genome]:
    return list(product(range(q), repeat=length))


def _sample_populations(config: ExperimentConfig, index: int, x: Genome) -> list[frozenset[Genome]]:
    # one independent stream per (individual, sample): evaluation order never matters
    out = []
    for s in range(config.samples):
        rng = np.random.default_rng([config.seed, index, s])
        draws = rng.integers(0, config.alphabet.size, size=(config.pop_size, config.length))
        out.append(frozenset(map(tuple, draws.tolist())) | {x})
    return out


def _run_one(config: ExperimentConfig, n: int) -> DistributionResult:
    target = frozenset([config.target_genome])
    genomes = all_genomes(config.length, config.alphabet.size)
    kstar = resolve_kstar(config.length, n, config.kstar)
    means: dict[Genome, float] = {}
    unreachable: dict[Genome, float] = {}
    for i, x in enumerate(genomes):
        total = 0
        missed = 0
        samples = _sample_populations(config, i, x)
        for pop in samples:
            d = directed_distance(pop, target, n, config.kstar, config.semantics, config.width)
            total += d.value
            missed += not d.reachable
        means[x] = total / len(samples)
        unreachable[x] = missed / len(samples)
    res = DistributionResult(n, kstar, config, means, unreachable)
    avg, var = res.summary
    log.info("n=%d k*=%d average=%.4f variance=%.4f unreachable=%.3f",
             n, kstar, avg, var, res.unreachable_fraction)
    return res


def default_workers() -> int:
    cap = os.environ.get("XOVER_THREADS")
    cpus = os.cpu_count() or 1
    return max(1, min(cpus, int(cap))) if cap else 1


def run_distribution(config: ExperimentConfig, workers: int | None = None) -> list[DistributionResult]:
    """One result per entry of ``config.n_values``.

    Every ``n`` sees the same random populations, so the comparison across
    crossover points is paired.  ``workers > 1`` spreads the ``n`` values over
    processes; results do not depend on it.
    """
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(config.n_values) == 1:
        return [_run_one(config, n) for n in config.n_values]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=min(workers, len(config.n_values))) as pool:
        return list(pool.map(_run_one, [config] * len(config.n_values), config.n_values))


def summarize(result: DistributionResult | Sequence[float]) -> tuple[float, float]:
    """Mean and population variance (divide by N) of the per-individual means."""
    vals = result.values() if isinstance(result, DistributionResult) else np.asarray(result, dtype=float)
    if len(vals) == 0:
        raise ValueError("nothing to summarize")
    return float(vals.mean()), float(vals.var())


# ---------------------------------------------------------------------------
# histogram and Gaussian fit


def histogram(values: Sequence[float], bin_width: float = BIN_WIDTH) -> list[tuple[float, int]]:
    """Counts in bins ``[k w, (k+1) w)`` anchored at 0; only non-empty bins are listed."""
    if bin_width <= 0:
        raise ValueError("bin width must be positive")
    vals = np.asarray(values, dtype=float)
    if len(vals) == 0:
        return []
    # the tiny nudge keeps exact multiples such as 2.0 / 0.05 out of the bin below
    k = np.floor(vals / bin_width + 1e-9).astype(np.int64)
    keys, counts = np.unique(k, return_counts=True)
    return [(float((kk + 0.5) * bin_width), int(c)) for kk, c in zip(keys, counts)]


def gaussian(x, amplitude, center, sigma):
    return amplitude * np.exp(-((x - center) ** 2) / (2 * sigma**2))


@dataclass(frozen=True)
class GaussianFit:
    amplitude: float
    center: float
    sigma: float
    bin_width: float
    residual: float

    @property
    def peak(self) -> float:
        return self.amplitude

    def __call__(self, x):
        return gaussian(np.asarray(x, dtype=float), self.amplitude, self.center, self.sigma)


def _filled_bins(hist: Sequence[tuple[float, int]], bin_width: float) -> tuple[np.ndarray, np.ndarray]:
    # include the empty bins between the first and last occupied ones
    centers = np.array([c for c, _ in hist])
    counts = np.array([n for _, n in hist], dtype=float)
    start = centers.min()
    k = np.rint((centers - start) / bin_width).astype(np.int64)
    full = np.zeros(int(k.max()) + 1)
    full[k] = counts
    return start + np.arange(len(full)) * bin_width, full


def fit_gaussian(hist: Sequence[tuple[float, int]], bin_width: float | None = None) -> GaussianFit:
    """Least-squares fit of ``a exp(-(x - mu)^2 / (2 sigma^2))`` to bin counts."""
    hist = [(float(c), n) for c, n in hist if n > 0]
    if len(hist) < 3:
        raise ValueError("need at least 3 non-empty bins to fit a Gaussian")
    if bin_width is None:
        gaps = np.diff(sorted(c for c, _ in hist))
        bin_width = float(gaps.min())
    x, y = _filled_bins(sorted(hist), bin_width)
    mean = float(np.average(x, weights=y))
    sd = float(np.sqrt(np.average((x - mean) ** 2, weights=y)))
    p0 = [float(y.max()), mean, sd]
    with warnings.catch_warnings():
        # covariance is unused; it is undefined when bins == parameters
        warnings.simplefilter("ignore", OptimizeWarning)
        popt, _ = curve_fit(gaussian, x, y, p0=p0, method="lm", maxfev=500 * 4,
                            ftol=1e-9, xtol=1e-9)
    a, mu, sigma = (float(v) for v in popt)
    resid = float(np.sum((gaussian(x, a, mu, sigma) - y) ** 2))
    return GaussianFit(a, mu, abs(sigma), bin_width, resid)


# ---------------------------------------------------------------------------
# CSV output


def _csv_text(header: Sequence[str], rows, comments: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def results_csv(results: Sequence[DistributionResult]) -> str:
    rows = []
    for r in results:
        fmt = r.config.alphabet.format
        for g in sorted(r.per_individual):
            rows.append([fmt(g), r.n, f"{r.per_individual[g]:.6f}", r.config.samples,
                         f"{r.unreachable[g]:.6f}"])
    return _csv_text(["genome", "n", "mean_distance", "samples", "unreachable_fraction"], rows)


def summary_csv(results: Sequence[DistributionResult]) -> str:
    rows = []
    for r in results:
        avg, var = r.summary
        rows.append([r.n, f"{avg:.6f}", f"{var:.6f}", r.kstar, r.config.semantics.value, r.config.seed])
    return _csv_text(["n", "average", "variance", "kstar", "semantics", "seed"], rows,
                     comments=["variance: population variance (divide by N) over per-individual means"])


def histogram_csv(results: Sequence[DistributionResult], bin_width: float = BIN_WIDTH) -> str:
    rows = []
    comments = [f"bin_width={bin_width}"]
    for r in results:
        hist = histogram(r.values(), bin_width)
        try:
            fit = fit_gaussian(hist, bin_width)
        except (ValueError, RuntimeError) as exc:
            fit = None
            comments.append(f"n={r.n} fit failed: {exc}")
        if fit is not None:
            comments.append(f"n={r.n} amplitude={fit.amplitude:.6f} center={fit.center:.6f} "
                            f"sigma={fit.sigma:.6f} residual={fit.residual:.6f}")
        for center, count in hist:
            fv = "" if fit is None else f"{float(fit(center)):.6f}"
            rows.append([r.n, f"{center:.3f}", count, fv])
    return _csv_text(["n", "bin_center", "count", "fit_value"], rows, comments=comments)
