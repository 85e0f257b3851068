"""Time the all-pairs verification kernel on each available backend.

    python benchmarks/bench_kernels.py [--depths 8 10 12] [--repeat 3]

The workload is the bi-Hölder witness from (Omega_2, 1/3) to (Omega_8, 1/2);
depth k checks all pairs of 2**k cylinder points.
"""

from __future__ import annotations

import argparse
import statistics
import time
from fractions import Fraction

from holder_lab import kernels
from holder_lab.witness import build_uniform_holder_witness, verify_witness


def bench(depth: int, backend: str, repeat: int) -> tuple[float, int]:
    w = build_uniform_holder_witness(2, Fraction(1, 3), 8, Fraction(1, 2))
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        report = verify_witness(w, depth, backend=backend)
        times.append(time.perf_counter() - start)
        assert report.passed
    return statistics.median(times), report.pair_count


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--depths", type=int, nargs="+", default=[8, 10, 12])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = sorted(kernels.BACKENDS)
    print(f"{'depth':>5} {'pairs':>10} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for depth in args.depths:
        results = {b: bench(depth, b, args.repeat) for b in backends}
        pairs = results[backends[0]][1]
        cells = " ".join(f"{results[b][0]:>9.3f}s" for b in backends)
        speedup = ""
        if "cython" in results:
            speedup = f"{results['python'][0] / results['cython'][0]:8.1f}x"
        print(f"{depth:>5} {pairs:>10} {cells} {speedup}")


if __name__ == "__main__":
    main()
