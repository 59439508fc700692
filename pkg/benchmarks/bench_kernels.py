#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Micro-benchmarks run both backends in-process on identical buffers; the
end-to-end benchmark reruns the full demo pipeline in a subprocess with
``SDM_CONSENSUS_BACKEND`` forced to each backend.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--skip-e2e]
"""

from __future__ import annotations

import argparse
import random
import subprocess
import sys
import time
from array import array

from sdm_consensus import _fallback

try:
    from sdm_consensus import _native
except ImportError:
    _native = None


def make_workload(n_dms: int, n_crits: int, n_alts: int, seed: int = 7):
    rng = random.Random(seed)
    return {
        "label": f"{n_dms} DMs x {n_crits} criteria x {n_alts} alternatives",
        "n_alts": n_alts,
        "n_dms": n_dms,
        "weights": array("d", (rng.random() for _ in range(n_crits))),
        "scores": array("d", (rng.random() for _ in range(n_crits * n_alts))),
        "left": array("d", (rng.random() for _ in range(n_alts))),
        "right": array("d", (rng.random() for _ in range(n_alts))),
        "distances": array("d", (rng.random() for _ in range(n_alts))),
        "values": array("d", (rng.random() for _ in range(n_dms * n_alts))),
        "row_weights": array("d", (rng.random() for _ in range(n_dms * n_alts))),
    }


def kernel_calls(backend, w):
    backend.evaluate_matrix(w["weights"], w["scores"], w["n_alts"])
    backend.abs_differences(w["left"], w["right"])
    backend.social_weights(w["distances"], 0.1, 0.9, False, 1e-9)
    backend.weighted_totals(w["values"], w["row_weights"], w["n_dms"], w["n_alts"])
    backend.rms_distance(w["left"], w["right"])


def time_backend(backend, workload, repeat: int) -> float:
    kernel_calls(backend, workload)  # warm up
    start = time.perf_counter()
    for _ in range(repeat):
        kernel_calls(backend, workload)
    return time.perf_counter() - start


def bench_micro(repeat: int) -> None:
    workloads = [
        make_workload(3, 3, 5),       # demo scale
        make_workload(25, 8, 20),     # committee scale
        make_workload(100, 12, 50),   # stress scale
    ]
    print(f"kernel pipeline micro-benchmark ({repeat} iterations per backend)")
    header = f"{'workload':<45} {'python':>10} {'native':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for workload in workloads:
        py = time_backend(_fallback, workload, repeat)
        if _native is None:
            print(f"{workload['label']:<45} {py * 1e3:>9.1f}ms {'n/a':>10} {'n/a':>8}")
            continue
        nat = time_backend(_native, workload, repeat)
        print(
            f"{workload['label']:<45} {py * 1e3:>9.1f}ms {nat * 1e3:>9.1f}ms "
            f"{py / nat:>7.1f}x"
        )


E2E_SNIPPET = """
import time
from sdm_consensus import demo, kernels
start = time.perf_counter()
for _ in range({repeat}):
    run = demo.run_demo()
    assert run.ok
elapsed = time.perf_counter() - start
print(f"{{kernels.BACKEND}}: {{elapsed:.3f}}s for {repeat} demo pipelines")
"""


def bench_end_to_end(repeat: int) -> None:
    print()
    print("end-to-end demo pipeline (subprocess per backend)")
    for backend in ("python", "native"):
        if backend == "native" and _native is None:
            print("native: extension not built, skipped")
            continue
        result = subprocess.run(
            [sys.executable, "-c", E2E_SNIPPET.format(repeat=repeat)],
            env={"PATH": "/usr/bin:/bin", "SDM_CONSENSUS_BACKEND": backend},
            capture_output=True,
            text=True,
        )
        print(result.stdout.strip() or result.stderr.strip())


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=20000)
    parser.add_argument("--e2e-repeat", type=int, default=200)
    parser.add_argument("--skip-e2e", action="store_true")
    args = parser.parse_args()

    if _native is None:
        print("note: compiled extension unavailable; native columns skipped")
    bench_micro(args.repeat)
    if not args.skip_e2e:
        bench_end_to_end(args.e2e_repeat)
    return 0


if __name__ == "__main__":
    sys.exit(main())
