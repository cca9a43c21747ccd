"""Command line front end: ``xover distance | closure | experiment``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 disagreement between
the representation engine and the brute-force oracle.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .distance import KStarPolicy, directed_distance, resolve_kstar
from .experiment import (ExperimentConfig, atomic_write, histogram_csv, results_csv, run_distribution,
                         summary_csv)
from .genome import BINARY, Alphabet, GenomeError, check_population, format_population, read_population
from .oracle import Semantics, oracle_min_generations, s_sequence

EXIT_DATA = 3
EXIT_DISAGREE = 4

log = logging.getLogger("xover")


class Disagreement(RuntimeError):
    pass


def _alphabet(text: str) -> Alphabet:
    return Alphabet(tuple(text))


def _n_list(text: str) -> tuple[int, ...]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError("empty list of crossover points")
    return tuple(out)


def _kstar(text: str) -> KStarPolicy:
    try:
        return KStarPolicy.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xover", description="n-points crossover distances between populations")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("distance", help="directed and symmetric distance between two population files")
    d.add_argument("pop1", type=Path)
    d.add_argument("pop2", type=Path)
    d.add_argument("-n", type=int, required=True, help="number of crossover points")
    d.add_argument("--kstar", type=_kstar, default=KStarPolicy(), help="'log' (default) or an integer")
    d.add_argument("--semantics", choices=[s.value for s in Semantics], default=Semantics.CONTAINMENT.value)
    d.add_argument("--engine", choices=["fast", "oracle", "both"], default="fast")
    d.add_argument("--alphabet", type=_alphabet, default=BINARY)

    c = sub.add_parser("closure", help="list the reachable stages S_0, S_1, ... of a population")
    c.add_argument("pop", type=Path)
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--max-gen", type=int, default=None)
    c.add_argument("--alphabet", type=_alphabet, default=BINARY)

    e = sub.add_parser("experiment", help="distance-to-target distribution over random populations")
    e.add_argument("--length", type=int, default=8)
    e.add_argument("--n-list", type=_n_list, default=None, help="e.g. 1-7 or 1,3,5 (default 1..length-1)")
    e.add_argument("--samples", type=int, default=100)
    e.add_argument("--pop-size", type=int, default=4)
    e.add_argument("--target", default=None, help="default: the all-ones genome")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--kstar", type=_kstar, default=KStarPolicy())
    e.add_argument("--semantics", choices=[s.value for s in Semantics], default=Semantics.CONTAINMENT.value)
    e.add_argument("--out-dir", type=Path, default=Path("results"))
    e.add_argument("--workers", type=int, default=None, help="processes (default: XOVER_THREADS or 1)")
    e.add_argument("--from-manifest", type=Path, default=None, help="rerun the configuration of a manifest")
    return p


def _fmt_pop(pop, alphabet) -> str:
    return " ".join(format_population(pop, alphabet))


def cmd_distance(args, out) -> int:
    p1 = read_population(args.pop1, args.alphabet)
    p2 = read_population(args.pop2, args.alphabet)
    if not p1 or not p2:
        raise GenomeError("population files must contain at least one genome")
    length = check_population(p1 | p2)
    sem = Semantics(args.semantics)
    kstar = resolve_kstar(length, args.n, args.kstar)

    def oracle_value(a, b):
        g = oracle_min_generations(a, b, args.n, sem, args.alphabet.size)
        return "unreachable" if g is None or g >= kstar else g

    print(f"length={length} n={args.n} k*={kstar} semantics={sem.value} engine={args.engine}", file=out)
    values = []
    for label, a, b in (("f(P1,P2)", p1, p2), ("f(P2,P1)", p2, p1)):
        if args.engine == "oracle":
            g = oracle_value(a, b)
            v = kstar if g == "unreachable" else g
            text = f"Unreachable(k*={kstar})" if g == "unreachable" else str(g)
        else:
            dv = directed_distance(a, b, args.n, args.kstar, sem)
            v, text = dv.value, str(dv)
            if args.engine == "both":
                g = oracle_value(a, b)
                fast = "unreachable" if not dv.reachable else dv.generations
                if g != fast:
                    raise Disagreement(f"{label}: fast engine gives {fast}, oracle gives {g}")
        values.append(v)
        print(f"{label} = {text}", file=out)
    d = (values[0] + values[1]) / 2
    print(f"d(P1,P2) = {d:g}", file=out)
    return 0


def cmd_closure(args, out) -> int:
    pop = read_population(args.pop, args.alphabet)
    if not pop:
        raise GenomeError("population file is empty")
    seq = s_sequence(pop, args.n, args.alphabet.size, max_gen=args.max_gen)
    for i, stage in enumerate(seq.stages):
        print(f"S_{i} size={len(stage)}: {_fmt_pop(stage, args.alphabet)}", file=out)
    last = seq.stages[-1]
    if args.max_gen is not None and len(seq.stages) - 1 == args.max_gen:
        from .genome import offspring_pool

        if offspring_pool(last, args.n, args.alphabet.size) != last:
            print(f"stopped at max-gen {args.max_gen} before the fixed point", file=out)
            return 0
    print(f"fixed point at index {seq.fixed_point_index}", file=out)
    return 0


def _config_from_args(args) -> ExperimentConfig:
    if args.from_manifest is not None:
        return config_from_manifest(json.loads(args.from_manifest.read_text(encoding="utf-8")))
    length = args.length
    return ExperimentConfig(
        length=length,
        n_values=args.n_list or tuple(range(1, length)),
        samples=args.samples,
        pop_size=args.pop_size,
        target=args.target or "1" * length,
        seed=args.seed,
        kstar=args.kstar,
        semantics=Semantics(args.semantics),
    )


def config_from_manifest(manifest: dict) -> ExperimentConfig:
    c = dict(manifest["config"])
    return ExperimentConfig(
        length=c["length"],
        n_values=tuple(c["n_values"]),
        samples=c["samples"],
        pop_size=c["pop_size"],
        target=c["target"],
        seed=c["seed"],
        kstar=KStarPolicy.parse(c["kstar"]),
        semantics=Semantics(c["semantics"]),
        alphabet=Alphabet(tuple(c["alphabet"])),
        width=c.get("width"),
    )


def cmd_experiment(args, out) -> int:
    config = _config_from_args(args)
    if config.length > 16:
        log.warning("length %d: enumerating every individual will be slow", config.length)
    out_dir: Path = args.out_dir
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise GenomeError(f"cannot create output directory {out_dir}: {exc}") from None
    start = time.perf_counter()
    results = run_distribution(config, args.workers)
    elapsed = time.perf_counter() - start
    files = {
        "results.csv": results_csv(results),
        "summary.csv": summary_csv(results),
        "histogram.csv": histogram_csv(results),
    }
    manifest = {
        "command": "experiment",
        "config": config.describe(),
        "seed": config.seed,
        "kstar": {str(r.n): r.kstar for r in results},
        "semantics": config.semantics.value,
        "version": __version__,
        "wall_clock_seconds": round(elapsed, 3),
        "files": sorted(files),
    }
    try:
        for name, text in files.items():
            atomic_write(out_dir / name, text)
        atomic_write(out_dir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise GenomeError(f"cannot write to {out_dir}: {exc}") from None
    for r in results:
        avg, var = r.summary
        print(f"n={r.n} average={avg:.4f} variance={var:.4f} k*={r.kstar} "
              f"unreachable={r.unreachable_fraction:.3f}", file=out)
    print(f"wrote {', '.join(sorted(files))} and manifest.json to {out_dir}", file=out)
    return 0


COMMANDS = {"distance": cmd_distance, "closure": cmd_closure, "experiment": cmd_experiment}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except Disagreement as exc:
        print(f"error: engines disagree: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except (GenomeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
