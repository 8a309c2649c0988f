"""Compare the compiled kernels against the numpy fallback.

Times the two hot loops (fused sample-and-bin, prefix score
accumulation) on shapes representative of the Monte Carlo and recovery
experiments, after first checking that both implementations agree on
the same inputs.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --replicates 2000 --n 1000
"""

import argparse
import math
import time

import numpy as np

from qstable import _kernels_py
from qstable._kernels import ACTIVE, HAVE_NATIVE
from qstable.rng import RngStream

if HAVE_NATIVE:
    from qstable import _ext


def _best_of(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_counts(args):
    gen = RngStream(seed=args.seed, stream_id=1).generator()
    shape = (args.replicates, args.n)
    u = gen.uniform(-math.pi / 2, math.pi / 2, size=shape)
    w = gen.exponential(size=shape)
    thresholds = np.array([0.25, 1.0, 4.0])
    cells = u.size

    rows = []
    for alpha in (0.0, 1.0, 1.7):
        ref = _kernels_py.power_bin_counts(u, w, alpha, 1.3, thresholds)
        secs_py = _best_of(
            lambda: _kernels_py.power_bin_counts(u, w, alpha, 1.3, thresholds),
            args.repeats,
        )
        line = f"power_bin_counts alpha={alpha:<3} numpy {1e3 * secs_py:8.2f} ms ({cells / secs_py / 1e6:7.1f} M/s)"
        if HAVE_NATIVE:
            got = _ext.power_bin_counts(u, w, alpha, 1.3, thresholds)
            if not np.array_equal(got, ref):
                raise AssertionError(f"kernel mismatch at alpha={alpha}")
            secs_c = _best_of(
                lambda: _ext.power_bin_counts(u, w, alpha, 1.3, thresholds),
                args.repeats,
            )
            line += f" | native {1e3 * secs_c:8.2f} ms ({cells / secs_c / 1e6:7.1f} M/s) | x{secs_py / secs_c:.2f}"
        rows.append(line)
    return rows


def bench_scores(args):
    gen = RngStream(seed=args.seed, stream_id=2).generator()
    block, m = 32, args.measurements
    sp = np.where(gen.random(size=(block, m)) < 0.5, -1.0, 1.0)
    w = gen.exponential(size=(block, m))
    checkpoints = np.array([m // 10, m // 4, m // 2, m], dtype=np.int64)
    cells = sp.size

    ref = _kernels_py.cs_prefix_scores(sp, w, 20.0, checkpoints)
    secs_py = _best_of(
        lambda: _kernels_py.cs_prefix_scores(sp, w, 20.0, checkpoints), args.repeats
    )
    line = f"cs_prefix_scores {block}x{m:<6} numpy {1e3 * secs_py:8.2f} ms ({cells / secs_py / 1e6:7.1f} M/s)"
    if HAVE_NATIVE:
        got = _ext.cs_prefix_scores(sp, w, 20.0, checkpoints)
        for a, b in zip(got, ref):
            if not np.allclose(a, b, atol=1e-10):
                raise AssertionError("score kernel mismatch")
        secs_c = _best_of(
            lambda: _ext.cs_prefix_scores(sp, w, 20.0, checkpoints), args.repeats
        )
        line += f" | native {1e3 * secs_c:8.2f} ms ({cells / secs_c / 1e6:7.1f} M/s) | x{secs_py / secs_c:.2f}"
    return [line]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--replicates", type=int, default=1000)
    parser.add_argument("--n", type=int, default=2000)
    parser.add_argument("--measurements", type=int, default=4605)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    print(f"active dispatch: {ACTIVE} (native available: {HAVE_NATIVE})")
    for line in bench_counts(args) + bench_scores(args):
        print(line)
    if not HAVE_NATIVE:
        print("native extension not built; numpy fallback timed alone")


if __name__ == "__main__":
    main()
