"""Accepting times of bundled Turing machines, their symmetrization and the compiled S-machine.

Usage: python3 scripts/compiled_steps.py [--machine erase] [--n-max 5]
"""

import argparse

from smkit.turing import BUNDLED, compile, compiled_accepts, lift_to_symmetric, tm_accepts


def inputs(name: str, n: int) -> str:
    if name == "anbn":
        return "a" * (n // 2) + "b" * (n // 2)
    if name == "increment":
        return "u" * n
    return "a" * n


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--machine", choices=sorted(BUNDLED), default="erase")
    p.add_argument("--n-max", type=int, default=5)
    args = p.parse_args()
    C = compile(BUNDLED[args.machine]())
    print(f"compiled {C.source.name}: {len(C.machine.rules)} rules, {C.machine.N} parts")
    print("n,source,symmetric,compiled,space")
    for n in range(args.n_max + 1):
        w = inputs(args.machine, n)
        base = tm_accepts(C.source, w)
        if base is None:
            print(f"{len(w)},,,,")
            continue
        sym = lift_to_symmetric(C.symmetric, base)
        comp = compiled_accepts(C, w)
        print(f"{len(w)},{base.time},{sym.time},{comp.time},{comp.space}")


if __name__ == "__main__":
    main()
