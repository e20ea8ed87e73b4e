"""Benchmark the compiled elimination scan against the numpy fallback.

Both implementations compute the same boolean mask over the full canonical
sign-vector table, so the comparison isolates kernel speed. The compiled
kernel is warmed up once before timing so JIT compilation is not billed to
the first measurement.

Run from the repository root:

    python benchmarks/bench_kernels.py --n 12 --rows 8 --repeat 5
"""

import argparse
import random
import statistics
import time

import numpy as np

from signelim import backend
from signelim.backend import (
    UNDETERMINED,
    eliminated_any_numpy,
    sign_vector_table,
)


def random_eliminators(rng, n, rows):
    out = []
    while len(out) < rows:
        t = tuple(
            rng.choice((-1, 0, 1, UNDETERMINED)) for _ in range(n)
        )
        if any(e in (-1, 1) for e in t):
            out.append(t)
    return np.asarray(out, dtype=np.int8)


def time_callable(fn, repeat):
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return samples


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=12, help="vector length")
    parser.add_argument("--rows", type=int, default=8, help="eliminator count")
    parser.add_argument("--repeat", type=int, default=5, help="timed repetitions")
    parser.add_argument("--seed", type=int, default=0, help="eliminator RNG seed")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    table = sign_vector_table(args.n)
    elim = random_eliminators(rng, args.n, args.rows)
    print(
        f"table: {table.shape[0]} canonical vectors of length {args.n}, "
        f"{args.rows} eliminators, repeat={args.repeat}"
    )

    numpy_times = time_callable(
        lambda: eliminated_any_numpy(table, elim), args.repeat
    )
    numpy_best = min(numpy_times)
    print(
        f"numpy fallback : best {numpy_best * 1e3:9.3f} ms  "
        f"median {statistics.median(numpy_times) * 1e3:9.3f} ms"
    )

    if not backend.USING_NUMBA:
        print(
            "compiled kernel: unavailable (numba not active; "
            "unset SIGNELIM_BACKEND or install numba)"
        )
        return

    from signelim.backend import eliminated_any_numba

    eliminated_any_numba(table, elim)  # warm-up: JIT compile outside timing
    numba_times = time_callable(
        lambda: eliminated_any_numba(table, elim), args.repeat
    )
    numba_best = min(numba_times)
    print(
        f"compiled kernel: best {numba_best * 1e3:9.3f} ms  "
        f"median {statistics.median(numba_times) * 1e3:9.3f} ms"
    )
    print(f"speedup (best numpy / best compiled): {numpy_best / numba_best:.1f}x")

    mismatch = (
        eliminated_any_numba(table, elim) != eliminated_any_numpy(table, elim)
    ).sum()
    print(f"parity check: {int(mismatch)} mismatched rows")


if __name__ == "__main__":
    main()
