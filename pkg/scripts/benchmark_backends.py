"""Time the gmp and fractions rational cores on the real hot kernels.

The backend is fixed at import, so each measurement runs in a fresh
subprocess with LEONARDPAIRS_BACKEND set.  Reported per backend:
recognition + full verification of a diameter-8 pair, a 16-point
subspace-lattice build and decomposition, and the characteristic
polynomial of a dense random 12x12 rational matrix.

Usage: python scripts/benchmark_backends.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

KERNELS = {
    "verify_sl2_d8": """
from leonardpairs.field import Rationals
from leonardpairs.generators import sl2_pair
from leonardpairs.leonard import verification_report
a, s = sl2_pair(Rationals(), 8)
report = verification_report(a, s)
assert report["all_checks_passed"]
""",
    "lattice_3_2": """
from leonardpairs.generators import build_lattice, lattice_pair
lat = build_lattice(3, 2)
_, _, dec = lattice_pair(lat)
assert dec.total_subspaces == 16
""",
    "charpoly_12": """
import random
from leonardpairs.field import Rationals
from leonardpairs.matrix import ExactMatrix, char_poly
rng = random.Random(0)
f = Rationals()
rows = [[f.random_element(rng).payload for _ in range(12)] for _ in range(12)]
poly = char_poly(ExactMatrix._raw(f, rows))
assert poly.degree == 12
""",
}

DRIVER = """
import time
start = time.perf_counter()
{body}
print(time.perf_counter() - start)
"""


def time_kernel(backend: str, body: str) -> float:
    env = dict(os.environ, LEONARDPAIRS_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-c", DRIVER.format(body=body)],
        capture_output=True,
        text=True,
        env=env,
    )
    if proc.returncode != 0:
        raise RuntimeError(f"{backend} kernel failed:\n{proc.stderr}")
    return float(proc.stdout.strip().splitlines()[-1])


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="best-of-N timing")
    args = parser.parse_args()

    results: dict = {}
    for name, body in KERNELS.items():
        row = {}
        for backend in ("gmp", "fractions"):
            try:
                best = min(time_kernel(backend, body) for _ in range(args.repeat))
            except RuntimeError as exc:
                print(f"skipping {backend}/{name}: {exc}", file=sys.stderr)
                continue
            row[backend] = round(best, 4)
        if "gmp" in row and "fractions" in row and row["gmp"] > 0:
            row["speedup"] = round(row["fractions"] / row["gmp"], 2)
        results[name] = row
    print(json.dumps(results, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
