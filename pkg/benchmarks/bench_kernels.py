"""Compare the compiled and pure-Python kernel backends.

Run from the repository root after building:

    python3 benchmarks/bench_kernels.py [--rows 200000] [--n 8] [--repeat 5]

The end-to-end Monte Carlo timing runs each backend in a fresh interpreter,
because the backend is chosen once at import (``NMLG_PURE_PYTHON``).
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from nmlgauss import _kernels_py

try:
    from nmlgauss import _kernels as compiled
except ImportError:
    compiled = None

MC_SNIPPET = (
    "import time; from nmlgauss import kernels; from nmlgauss.core import GaussianClass;"
    "from nmlgauss.verify import mc_atten;"
    "t = time.perf_counter(); mc_atten({n}, GaussianClass(1.0, 0.5, 2.0), {samples}, seed=1);"
    "print(kernels.BACKEND, time.perf_counter() - t)"
)


def best_of(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_kernels(rows: int, n: int, repeat: int) -> None:
    x = np.random.default_rng(0).normal(size=(rows, n))
    backends = [("python", _kernels_py)]
    if compiled is not None:
        backends.append(("compiled", compiled))
    else:
        print("compiled extension not built; timing the python backend only")
    print(f"{'kernel':<20}{'backend':<10}{'seconds':>10}{'speedup':>9}")
    for name, call in (
        ("log_envelope_rows", lambda m: m.log_envelope_rows(x, 1.0, 0.5, 2.0)),
        ("quad_form_rows", lambda m: m.quad_form_rows(x)),
        ("row_stats", lambda m: m.row_stats(x)),
    ):
        base = None
        for label, module in backends:
            t = best_of(lambda: call(module), repeat)
            base = base or t
            print(f"{name:<20}{label:<10}{t:>10.4f}{base / t:>8.2f}x")


def bench_mc(n: int, samples: int) -> None:
    print(f"\nmc_atten n={n}, {samples} samples (fresh interpreter per backend)")
    for flag in ("1", "0"):
        env = dict(os.environ, NMLG_PURE_PYTHON=flag)
        out = subprocess.run([sys.executable, "-c", MC_SNIPPET.format(n=n, samples=samples)],
                             env=env, capture_output=True, text=True, check=True).stdout.split()
        print(f"  {out[0]:<10}{float(out[1]):>8.3f}s")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=200_000)
    parser.add_argument("--n", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--mc-samples", type=int, default=1_000_000)
    args = parser.parse_args()
    bench_kernels(args.rows, args.n, args.repeat)
    bench_mc(args.n, args.mc_samples)


if __name__ == "__main__":
    main()
