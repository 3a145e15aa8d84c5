"""Minimal accepting time of the adding machine on a0^n, with an equivalence fit.

Usage: python3 scripts/adding_growth.py [--n-max 7] [--alphabet a] [--csv out.csv]
"""

import argparse
import time

from smkit.growth import candidate, fit_equivalence, samples_from_rows, write_csv, bench
from smkit.smachine import Bounds, Configuration, adding_machine
from smkit.words import EMPTY, Word


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n-max", type=int, default=7)
    p.add_argument("--alphabet", default="a")
    p.add_argument("--csv")
    args = p.parse_args()
    A = args.alphabet.split(",")
    Z = adding_machine(A)
    zero = f"{A[0]}0"
    rows = []
    t0 = time.perf_counter()
    for n in range(1, args.n_max + 1):
        start = Configuration(("L", "p1", "R"), (Word(((zero, 1),) * n), EMPTY))
        rows += bench(Z, [start], Bounds(max_space=n + 3), lambda c: c.states[1] == "p3")
    elapsed = time.perf_counter() - t0
    text = write_csv(rows, args.csv)
    print(text, end="")
    steps = [r.value for r in rows]
    ratios = [b / a for a, b in zip(steps, steps[1:])]
    print("ratios:", " ".join(f"{r:.3f}" for r in ratios))
    for expr in ("2^n", "n^3", "n^4"):
        print(fit_equivalence(samples_from_rows(rows), candidate(expr), 100))
    print(f"elapsed: {elapsed:.2f}s")


if __name__ == "__main__":
    main()
