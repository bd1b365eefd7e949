"""Compare the compiled and pure-Python supremum kernels.

    python3 benchmarks/bench_kernels.py [--grid 40] [--repeat 3] [--certify]

Reports wall time per backend for ``sup_bound`` over all pairs p1 > p2 of a
square grid, checks that both backends agree, and optionally times a small
certification run with each backend.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from smoothcert import kernels


def time_sup(backend, pairs, repeat):
    best, values = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        values = [backend.sup_bound(p1, p2)[0] for p1, p2 in pairs]
        best = min(best, time.perf_counter() - t0)
    return best, np.array(values)


CERTIFY_SNIPPET = """
import time, numpy as np
from smoothcert import kernels
from smoothcert.certify import certify_dataset
from smoothcert.classifiers import random_linear_model
from smoothcert.formats import Dataset
from smoothcert.mechanisms import MechanismKind, NoiseMechanism
rng = np.random.default_rng(0)
model = random_linear_model(10, 32, seed=0)
ds = Dataset(rng.standard_normal((200, 32)) * 0.1, rng.integers(0, 10, 200))
t0 = time.perf_counter()
certify_dataset(model, ds, NoiseMechanism(MechanismKind.GAUSSIAN, 0.25, 32), 1000)
print(kernels.BACKEND, time.perf_counter() - t0)
"""


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=40, help="grid points per axis")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--certify", action="store_true", help="also time a 200-point certify run")
    args = ap.parse_args()

    grid = np.linspace(1e-3, 0.999, args.grid)
    pairs = [(float(a), float(b)) for a in grid for b in grid if a > b]
    names = kernels.available_backends()
    if "cython" not in names:
        print("compiled kernel not built; only the Python backend is available")

    results = {}
    for name in names:
        elapsed, values = time_sup(kernels.get_backend(name), pairs, args.repeat)
        results[name] = values
        print(f"sup_bound  {name:7s} {len(pairs)} pairs  {elapsed:.4f}s  "
              f"{1e6 * elapsed / len(pairs):.1f} us/pair")
    if len(results) == 2:
        diff = np.max(np.abs(results["cython"] - results["python"]))
        print(f"max |cython - python| = {diff:.3g}")

    if args.certify:
        for pure in ("0", "1"):
            env = {**os.environ, "SMOOTHCERT_PURE": pure}
            out = subprocess.run([sys.executable, "-c", CERTIFY_SNIPPET], env=env,
                                 capture_output=True, text=True, check=True).stdout.split()
            print(f"certify    {out[0]:7s} 200 points  {float(out[1]):.3f}s")


if __name__ == "__main__":
    main()
