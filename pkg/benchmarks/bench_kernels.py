"""Numba kernels vs the pure-numpy fallback.

Runs each mode in its own interpreter (ODDSUB_NO_NUMBA must be set before
import) and prints a comparison table.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json]
"""

import argparse
import json
import os
import subprocess
import sys
import time

CASES = [
    ("mois_brute", "random_sp", 18),
    ("mois_brute", "random_sp", 22),
    ("mois_dp", "random_sp", 2_000),
    ("mois_dp", "random_sp", 20_000),
    ("construct_odd", "random_sp", 20_000),
]


def worker(repeat: int) -> dict:
    from oddsub import _kernels, construct_odd, mois_brute, mois_dp
    from oddsub.generators import random_sp

    funcs = {"mois_brute": mois_brute, "mois_dp": mois_dp, "construct_odd": construct_odd}
    out = {"numba": _kernels.USE_NUMBA, "cases": []}
    for name, family, n in CASES:
        g = random_sp(n, seed=1)
        t0 = time.perf_counter()
        funcs[name](g)                       # first call includes JIT compilation
        first = time.perf_counter() - t0
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            funcs[name](g)
            best = min(best, time.perf_counter() - t0)
        out["cases"].append({"op": name, "family": family, "n": n, "first": first, "best": best})
    return out


def run_mode(no_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("ODDSUB_NO_NUMBA", None)
    if no_numba:
        env["ODDSUB_NO_NUMBA"] = "1"
    res = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        json.dump(worker(args.repeat), sys.stdout)
        return

    fast, slow = run_mode(False, args.repeat), run_mode(True, args.repeat)
    if args.json:
        json.dump({"numba": fast, "numpy": slow}, sys.stdout, indent=1)
        print()
        return
    print(f"{'op':<14}{'n':>8}{'numba first':>13}{'numba best':>12}{'numpy best':>12}{'speedup':>9}")
    for a, b in zip(fast["cases"], slow["cases"]):
        print(f"{a['op']:<14}{a['n']:>8}{a['first']:>12.3f}s{a['best']:>11.3f}s"
              f"{b['best']:>11.3f}s{b['best'] / a['best']:>8.1f}x")


if __name__ == "__main__":
    main()
