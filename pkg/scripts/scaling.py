"""Time one-point distances for growing genome lengths and report the log-log slope."""

import math
import time

import numpy as np

from xover.distance import _min_generations, individual_min_generations
from xover.poset import mu_saturate, represent


def main(lengths=(8, 16, 32, 64), reps=30, pop_size=5, seed=0):
    rng = np.random.default_rng(seed)
    medians = []
    for length in lengths:
        times, iters = [], 0
        for _ in range(reps):
            x = tuple(rng.integers(0, 2, length).tolist())
            p = frozenset(tuple(r) for r in rng.integers(0, 2, (pop_size, length)).tolist())
            _min_generations.cache_clear()
            t0 = time.perf_counter()
            individual_min_generations(x, p, 1)
            times.append(time.perf_counter() - t0)
            iters = max(iters, mu_saturate(represent(x, p, 1), 1).iterations)
        medians.append(float(np.median(times)))
        print(f"length={length:3d} median={medians[-1]:.2e}s max_iterations={iters} "
              f"bound={math.ceil(math.log2(length)) + 1}")
    slope = np.polyfit(np.log(lengths), np.log(medians), 1)[0]
    print(f"log-log slope {slope:.2f}")


if __name__ == "__main__":
    main()
