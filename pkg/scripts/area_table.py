"""Areas of commutator powers [a^k, b] in Z^2 and of k^(t^m) k^-1 words in the shift group.

Both area oracles are run; they must agree whenever both finish.

Usage: python3 scripts/area_table.py [--k-max 3]
"""

import argparse
import time

from smkit.grouplab import collapse_brothers, shift_machine
from smkit.presentations import area_conjugates, area_insertion, symmetrize
from smkit.words import join, parse_word, word


def row(label, w, P, budget, max_len, conj_len):
    t0 = time.perf_counter()
    a = area_insertion(w, P, budget, max_len)
    t1 = time.perf_counter()
    b = area_conjugates(w, P, min(budget, 4), conj_len)
    t2 = time.perf_counter()
    agree = "-" if not (a.known and b.known) else ("yes" if a.value == b.value else "NO")
    print(f"{label:24s} |w|={len(w):3d}  insertion={a} ({t1 - t0:.2f}s)  conjugates={b} ({t2 - t1:.2f}s)  agree={agree}")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--k-max", type=int, default=3)
    args = p.parse_args()
    Z2 = symmetrize(["a", "b"], [parse_word("a b a^-1 b^-1")])
    for k in range(1, args.k_max + 1):
        ak = word(*(["a"] * k))
        w = join(ak, word("b"), ak.inverse(), word("b^-1"))
        row(f"[a^{k}, b] in Z^2", w, Z2, k + 1, 4 * k + 8, 2)
    P = collapse_brothers(shift_machine(1), drop=("E",))
    for m in range(1, args.k_max + 1):
        t = word(*(["t1"] * m))
        am = word(*(["a"] * m))
        # t^-m k t^m = k a^m
        w = join(t.inverse(), word("k"), t, am.inverse(), word("k^-1"))
        row(f"k^(t^{m}) = k a^{m}", w, P, m * (m + 1) // 2 + m + 1, 6 * m + 10, 1)


if __name__ == "__main__":
    main()
