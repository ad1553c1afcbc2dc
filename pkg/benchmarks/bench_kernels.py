"""Timing comparison between the compiled and pure-python objective kernels.

Each objective is evaluated repeatedly on fixed random inputs under both
backends, then one full measurement search is timed end to end. Run as

    python3 benchmarks/bench_kernels.py --repeats 2000
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from qcorr import kernels, oracle
from qcorr.sampling import random_rank_k


def _time_calls(fn, args, repeats: int) -> float:
    fn(*args)  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - start) / repeats


def _objective_cases(rng):
    cases = []
    rho22 = random_rank_k((2, 2), 3, rng)
    t22 = oracle._measured_first_tensor(rho22, 0)
    cases.append(
        ("povm d_m=2 n=4", "povm_objective", (rng.uniform(-math.pi, math.pi, 16), t22, 2, 2, 4))
    )
    cases.append(
        ("projective d_m=2", "projective_objective", (rng.uniform(-math.pi, math.pi, 4), t22, 2, 2))
    )
    rho42 = random_rank_k((4, 2), 2, rng)
    t42 = oracle._measured_first_tensor(rho42, 0)
    cases.append(
        ("projective d_m=4", "projective_objective", (rng.uniform(-math.pi, math.pi, 16), t42, 4, 2))
    )
    from qcorr.states import hermitian_eig

    spec = hermitian_eig(rho22.matrix)
    phi = spec.eigenvectors[:, :2] * np.sqrt(spec.eigenvalues[:2])
    cases.append(
        ("ensemble m=4 r=2", "ensemble_objective", (rng.standard_normal(16), phi, 2, 2, 4, 2))
    )
    return cases


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (active: {kernels.active_backend()})")
    if len(backends) < 2:
        print("compiled backend unavailable; timing python only")

    rng = np.random.default_rng(args.seed)
    cases = _objective_cases(rng)
    original = kernels.active_backend()

    timings = {}
    try:
        for backend in backends:
            kernels.set_backend(backend)
            for label, fn_name, fn_args in cases:
                fn = getattr(kernels, fn_name)
                timings[(label, backend)] = _time_calls(fn, fn_args, args.repeats)

        print(f"\nper-call objective timings ({args.repeats} repeats):")
        width = max(len(label) for label, _, _ in cases)
        for label, _, _ in cases:
            line = f"  {label:<{width}}"
            for backend in backends:
                line += f"  {backend}: {timings[(label, backend)] * 1e6:8.2f} us"
            if len(backends) == 2:
                ratio = timings[(label, "python")] / timings[(label, "compiled")]
                line += f"  speedup: {ratio:5.1f}x"
            print(line)

        print("\nend-to-end projective search (2-qubit, 8 restarts):")
        rho = random_rank_k((2, 2), 3, np.random.default_rng(args.seed + 1))
        cfg = oracle.SearchConfig(seed=0, restarts=8)
        for backend in backends:
            kernels.set_backend(backend)
            start = time.perf_counter()
            res = oracle.projective_search(rho, 0, cfg)
            elapsed = time.perf_counter() - start
            print(f"  {backend}: {elapsed:6.3f} s  (value {res.value:.12f})")
    finally:
        kernels.set_backend(original)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
