"""Equivalence fits of closed-form functions against candidates, with the binding samples.

Reproduces the two fitting checks of the acceptance suite and shows, for
each C, the first sample where an inequality fails.

Usage: python3 scripts/equivalence_fits.py
"""

import numpy as np

from smkit.growth import candidate, fit_equivalence, log_grid, sample_function


def first_failure(ns, f, g, C):
    n = np.asarray(ns, dtype=float)
    lower = g(np.floor(n / C)) / C - C * n
    upper = C * g(C * n) + C * n
    bad = np.nonzero((lower > f) | (f > upper))[0]
    if not len(bad):
        return None
    i = bad[0]
    side = "lower" if lower[i] > f[i] else "upper"
    return int(n[i]), side


def report(title, fn, ns, expr, cmax):
    g = candidate(expr)
    samples = sample_function(fn, ns)
    f = np.array([s.value for s in samples], dtype=float)
    print(title)
    print("  ", fit_equivalence(samples, g, cmax))
    for C in range(1, 6):
        print(f"   C={C}: first failure {first_failure(ns, f, g, C)}")


def main() -> None:
    report("5 n^3.2 vs n^3.2, n <= 1000", lambda n: 5 * n**3.2, range(1, 1001), "n^3.2", 100)
    ns = log_grid(10**6)
    report("n^2 log n vs n^2, n <= 10^6", lambda n: n * n * np.log2(n) if n > 1 else 0, ns, "n^2", 100)


if __name__ == "__main__":
    main()
