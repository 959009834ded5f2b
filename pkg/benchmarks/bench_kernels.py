"""Time the numba kernels against the numpy fallback and check they agree.

    python benchmarks/bench_kernels.py --samples 10000000 --repeat 3
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from polyball import _kernels as K


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=2_000_000)
    ap.add_argument("--rows", type=int, default=200_000)
    ap.add_argument("--d", type=int, default=6)
    ap.add_argument("--k", type=float, default=2.5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if "numba" not in K.available_backends():
        raise SystemExit("numba is not importable; nothing to compare")

    empty = np.zeros(args.d)
    cases = []
    for label, kind in (("hits rho", K.RHO), ("hits rho*", K.RHO_STAR)):
        def run(backend, kind=kind):
            return K.count_hits(kind, args.k, empty, 0.0, args.d, 1.0, args.samples, args.seed,
                                backend=backend)
        cases.append((f"{label} n={args.samples:.0e}", run, lambda a, b: a == b))

    x = K.uniforms(args.seed, 0, args.rows * args.d).reshape(args.rows, args.d) * 2 - 1

    def rows(backend):
        return K.knorm_rows(x, args.k, backend=backend)
    cases.append((f"knorm_rows n={args.rows:.0e}", rows,
                  lambda a, b: np.allclose(a, b, rtol=0, atol=1e-12)))

    def draws(backend):
        return K.uniforms(args.seed, 0, args.samples, backend=backend)
    cases.append((f"uniforms n={args.samples:.0e}", draws, lambda a, b: np.array_equal(a, b)))

    print(f"{'kernel':<28}{'numba s':>10}{'numpy s':>10}{'speedup':>9}  agree")
    for label, fn, same in cases:
        fn("numba")  # compile outside the timing
        t_nb, out_nb = best_of(lambda: fn("numba"), args.repeat)
        t_np, out_np = best_of(lambda: fn("numpy"), args.repeat)
        print(f"{label:<28}{t_nb:>10.3f}{t_np:>10.3f}{t_np / t_nb:>8.1f}x  {same(out_nb, out_np)}")


if __name__ == "__main__":
    main()
