"""Benchmark the compiled (GSL/Cython) kernel lane against the pure
NumPy/SciPy fallback.

Covers the hot kernels (Bessel evaluation, cascade CDF, exact quantile
inversion) and the end-to-end Monte-Carlo outage estimate, which uses the
cached quantile table in both lanes.

Usage: python bench/benchmark.py [--quick]
"""

import argparse
import time

import numpy as np

import fabc
from fabc import _backend


def timeit(fn, repeats=3):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run(quick: bool) -> None:
    n_arr = 200_000 if quick else 2_000_000
    n_inv = 20_000 if quick else 200_000
    n_mc = 100_000 if quick else 1_000_000

    rng = np.random.default_rng(0)
    x_j0 = rng.uniform(0.0, 200.0, n_arr)
    x_k1 = np.exp(rng.uniform(np.log(1e-6), np.log(690.0), n_arr))
    r = np.exp(rng.uniform(np.log(1e-8), np.log(50.0), n_arr))
    u = rng.uniform(0.0, 1.0, n_inv)
    cfg = fabc.SystemConfig()

    cases = [
        (f"bessel_j0 x{n_arr}", lambda: fabc.bessel_j0(x_j0)),
        (f"bessel_k1 x{n_arr}", lambda: fabc.bessel_k1(x_k1)),
        (f"product_channel_cdf x{n_arr}", lambda: fabc.product_channel_cdf(r)),
        (f"exact quantile x{n_inv}", lambda: fabc.product_channel_quantile(u)),
        (f"estimate_outage n={n_mc}", lambda: fabc.estimate_outage(cfg, n=n_mc, seed=1)),
    ]

    lanes = _backend.available()
    print(f"backends: {lanes} (active default: {_backend.name()})")
    header = f"{'kernel':34s}" + "".join(f"{lane:>14s}" for lane in lanes)
    if len(lanes) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))
    for name, fn in cases:
        times = {}
        for lane in lanes:
            with _backend.use(lane):
                fn()  # warm caches (quantile table, scipy internals)
                times[lane] = timeit(fn)
        row = f"{name:34s}" + "".join(f"{times[lane]*1e3:>11.1f} ms" for lane in lanes)
        if "compiled" in times and "python" in times:
            row += f"{times['python']/times['compiled']:>9.2f}x"
        print(row)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    run(parser.parse_args().quick)
