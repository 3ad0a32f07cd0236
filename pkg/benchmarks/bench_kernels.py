"""Time the numba loop kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py [--length 16] [--repeat 5]

Both versions are importable regardless of SCALESCOPE_DISABLE_NUMBA, so a
single process can time them side by side. Without numba installed the
"loop" column runs as plain Python and is only timed for short inputs.
"""
import argparse
import random
import time

import numpy as np

from scalescope import kernels
from scalescope._accel import HAVE_NUMBA


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=int, default=16, help="message length for composition scoring")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    msg = "".join(rng.choice("ab ") for _ in range(args.length))
    sid, sizes = kernels.substring_table(msg)
    weights = np.array([rng.randint(1, 1000) for _ in range(5000)], dtype=np.int64)

    # compile outside the timed region
    kernels.composition_scores_loop(sid[:4, :4].copy(), sizes, 3)
    kernels.entropy_from_weights_loop(weights[:3])

    loop_ok = HAVE_NUMBA or args.length <= 12
    rows = [("entropy_from_weights (5000 symbols)",
             best_of(lambda: kernels.entropy_from_weights_loop(weights), args.repeat),
             best_of(lambda: kernels.entropy_from_weights_numpy(weights), args.repeat))]
    loop_t = best_of(lambda: kernels.composition_scores_loop(sid, sizes, len(msg)), args.repeat) if loop_ok else float("nan")
    rows.append((f"composition_scores (n={len(msg)}, {1 << (len(msg) - 1)} tilings)", loop_t,
                 best_of(lambda: kernels.composition_scores_numpy(sid, sizes, len(msg)), args.repeat)))

    h1, _, _ = kernels.composition_scores_numpy(sid, sizes, len(msg))
    if loop_ok:
        h0, _, _ = kernels.composition_scores_loop(sid, sizes, len(msg))
        print(f"max |loop - numpy| = {np.max(np.abs(h0 - h1)):.3g}")

    print(f"loop backend: {'numba' if HAVE_NUMBA else 'pure python'}")
    print(f"{'kernel':48s} {'loop s':>10s} {'numpy s':>10s} {'ratio':>7s}")
    for name, a, b in rows:
        print(f"{name:48s} {a:10.5f} {b:10.5f} {b / a:7.2f}")


if __name__ == "__main__":
    main()
