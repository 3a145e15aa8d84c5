"""Command-line front end.

Exit codes: 0 success, 1 domain failure (not found, unknown, unaccepted),
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import diagrams, growth, grouplab, presentations, smachine, smio, turing
from .presentations import Presentation
from .smachine import Bounds, Configuration, SMachine
from .words import EMPTY, join, parse_word, word

PRESETS = ("adding", "shift2")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- loading


def _preset_machine(name: str) -> SMachine:
    if name == "adding":
        return smachine.adding_machine(["a"])
    return grouplab.shift_machine(2)


def _preset_presentation(name: str) -> Presentation:
    if name == "adding":
        return smachine.presentation_of(smachine.adding_machine(["a"]))
    return grouplab.collapse_brothers(grouplab.shift_machine(2), drop=("E",))


def _machine(args) -> SMachine:
    if args.preset:
        return _preset_machine(args.preset)
    if not args.file:
        raise UsageError("give a machine file or --preset")
    return smio.load_sm(args.file)


def _presentation(args) -> Presentation:
    if getattr(args, "preset", None):
        return _preset_presentation(args.preset)
    if not args.file:
        raise UsageError("give a presentation file or --preset")
    return presentations.load_grp(args.file)


def _bounds(args) -> Bounds:
    return Bounds(args.max_steps, args.max_space, args.max_frontier)


def _add_bounds(p: argparse.ArgumentParser, steps: int = 100_000) -> None:
    p.add_argument("--max-steps", type=int, default=steps)
    p.add_argument("--max-space", type=int, default=64)
    p.add_argument("--max-frontier", type=int, default=1_000_000)


def _letters(text: str) -> list[str]:
    return [t for t in text.replace(",", " ").split() if t]


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _states_target(S: SMachine, text: str):
    states = tuple(text.split())
    if len(states) != S.N:
        raise UsageError(f"--accept-states needs {S.N} states")
    return lambda c: c.states == states


def _print_computation(comp, trace: bool) -> None:
    print(f"steps: {comp.time}")
    print(f"space: {comp.space}")
    print(f"history: {smachine.format_history(comp.history)}")
    if trace:
        for c in comp.trace:
            print(f"  {c.word}")


# ---------------------------------------------------------------- commands


def cmd_run(args) -> int:
    S = _machine(args)
    start = S.configuration(args.start)
    target = _states_target(S, args.accept_states) if args.accept_states else S.configuration(args.accept)
    res = smachine.explore(S, start, target, _bounds(args))
    if not res.found:
        how = "exhausted" if res.exhausted else "bound reached"
        print(f"not_found ({how}, {res.explored} configurations, depth {res.depth})")
        return 1
    _print_computation(res.computation, args.trace)
    return 0


def cmd_compile(args) -> int:
    T = smio.load_tm(args.file)
    C = turing.compile(T)
    start = C.encode(EMPTY).states
    _write(args.output, smio.dump_sm(C.machine, start))
    print(f"compiled {T.name}: {len(C.machine.rules)} rules, {C.machine.N} parts", file=sys.stderr)
    return 0


def cmd_miller(args) -> int:
    P = presentations.load_grp(args.file)
    M = grouplab.miller(P)
    _write(args.output, smio.dump_sm(M.machine))
    if args.word is not None:
        w = parse_word(args.word)
        res = smachine.explore(M.machine, M.start(w), M.start(EMPTY), _bounds(args))
        if not res.found:
            # a miss is never a proof: the space bound cuts the search
            print(f"unknown ({res.explored} configurations, depth {res.depth})")
            return 1
        _print_computation(res.computation, False)
    return 0


def cmd_adding(args) -> int:
    A = _letters(args.alphabet)
    if not A:
        raise UsageError("--alphabet needs at least one letter")
    S = smachine.adding_machine(A)
    if args.word is None:
        sys.stdout.write(smio.dump_sm(S))
        return 0
    w = parse_word(args.word)
    start = S.configuration(join(word("L"), w, word("p1", "R")))
    res = smachine.explore(S, start, lambda c: c.states == ("L", "p3", "R"), _bounds(args))
    if not res.found:
        print("not_found")
        return 1
    _print_computation(res.computation, args.trace)
    return 0


def cmd_hub(args) -> int:
    S = _machine(args)
    H = grouplab.hub_group(S, args.copies)
    _write(args.output, presentations.dump_grp(H.presentation, f"hub group of {S.name}, {H.copies} copies"))
    return 0


def cmd_higman(args) -> int:
    R = smio.load_recognizer(args.file)
    B = grouplab.higman_bundle(R, _letters(args.alphabet), args.copies)
    P = B.merged if args.merged else B.amalgam
    which = "merged" if args.merged else "amalgam"
    _write(args.output, presentations.dump_grp(P, f"{which} for {R.machine.name}, {B.G.copies} copies"))
    print(
        f"G: {len(B.G.presentation.generators)} generators, G': {len(B.Gprime.presentation.generators)}, "
        f"A: {len(B.A)}, amalgam: {len(B.amalgam.generators)}, merged: {len(B.merged.generators)}",
        file=sys.stderr,
    )
    return 0


def cmd_area(args) -> int:
    P = _presentation(args)
    w = parse_word(args.word)
    res = presentations.area_insertion(w, P, args.budget, args.max_len)
    print(f"area: {res}")
    if res.known and args.witness:
        for pos, r in res.witness:
            print(f"  insert {r} at {pos}")
    return 0 if res.known else 1


def _dot(D, path: str | None) -> None:
    if path:
        Path(path).write_text(diagrams.export_dot(D))


def cmd_trapezium(args) -> int:
    S = _machine(args)
    start = S.configuration(args.start)
    hist = smachine.parse_history(args.history)
    try:
        comp = smachine.replay_history(S, start, hist)
    except smachine.NotApplicableError as exc:
        print(f"not applicable: {exc}")
        return 1
    T = diagrams.trapezium(S, comp)
    v = diagrams.verify(T, smachine.presentation_of(S))
    print(f"bands: {len(T.bands)}")
    print(f"area: {T.area}")
    print(f"diameter bound: {T.diameter_bound}")
    d = T.diameter()
    print(f"diameter: {'n/a' if d is None else d}")
    print(f"verify: {v}")
    _dot(T, args.dot)
    return 0 if v else 1


def cmd_disc(args) -> int:
    S = _machine(args)
    H = grouplab.hub_group(S, args.copies)
    base_start = S.configuration(args.start)
    res = smachine.explore(S, base_start, S.accept, _bounds(args))
    if not res.found:
        print("not_found")
        return 1
    comp = grouplab.lift_computation(res.computation, H.copies, H.separators)
    D = diagrams.disc(H.machine, H.hub, comp)
    v = diagrams.verify(D, H.presentation)
    print(f"trapezium area: {D.trapezium.area}")
    print(f"disc area: {D.area}")
    print(f"verify: {v}")
    _dot(D, args.dot)
    return 0 if v else 1


def _read_inputs(S: SMachine, path: str) -> list[Configuration]:
    out = []
    for raw in Path(path).read_text().splitlines():
        line = presentations._strip_comment(raw).strip()
        if line:
            out.append(S.configuration(line))
    return out


def cmd_bench(args) -> int:
    S = _machine(args)
    inputs = _read_inputs(S, args.inputs)
    target = _states_target(S, args.accept_states) if args.accept_states else None
    rows = growth.bench(S, inputs, _bounds(args), target)
    text = growth.write_csv(rows)
    _write(args.csv, text)
    return 0 if all(r.accepted for r in rows) else 1


def cmd_fit(args) -> int:
    rows = growth.read_csv(args.csv)
    samples = growth.samples_from_rows(rows, args.column)
    if not samples:
        raise UsageError(f"{args.csv}: no accepted samples")
    fit = growth.fit_equivalence(samples, growth.candidate(args.candidate), args.cmax)
    print(fit)
    return 0 if fit.C is not None else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smkit", description="S-machines, their groups and diagrams")
    sub = p.add_subparsers(dest="command", required=True)

    def machine_arg(q: argparse.ArgumentParser) -> None:
        q.add_argument("file", nargs="?", help=".sm file")
        q.add_argument("--preset", choices=PRESETS)

    q = sub.add_parser("run", help="search a computation between two configurations")
    machine_arg(q)
    q.add_argument("--start", required=True)
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--accept")
    g.add_argument("--accept-states", help="accept any configuration with these states")
    q.add_argument("--trace", action="store_true")
    _add_bounds(q)
    q.set_defaults(func=cmd_run)

    q = sub.add_parser("compile", help="compile a .tm file to an S-machine")
    q.add_argument("file")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_compile)

    q = sub.add_parser("miller", help="Miller machine of a presentation")
    q.add_argument("file")
    q.add_argument("-o", "--output")
    q.add_argument("--word", help="also search L q w R ->* L q R")
    _add_bounds(q)
    q.set_defaults(func=cmd_miller, max_frontier=10_000)

    q = sub.add_parser("adding", help="the adding machine")
    q.add_argument("--alphabet", required=True)
    q.add_argument("--word")
    q.add_argument("--trace", action="store_true")
    _add_bounds(q)
    q.set_defaults(func=cmd_adding)

    q = sub.add_parser("hub", help="hub presentation of k parallel copies")
    machine_arg(q)
    q.add_argument("--copies", type=int, default=grouplab.MIN_COPIES)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_hub)

    q = sub.add_parser("higman", help="amalgam of the two hub groups of a recognizer")
    q.add_argument("file")
    q.add_argument("--alphabet", required=True)
    q.add_argument("--copies", type=int, default=grouplab.MIN_COPIES)
    q.add_argument("--merged", action="store_true", help="write the Tietze-merged presentation")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_higman)

    q = sub.add_parser("area", help="bounded area of a word")
    q.add_argument("file", nargs="?", help=".grp file")
    q.add_argument("--preset", choices=PRESETS)
    q.add_argument("--word", required=True)
    q.add_argument("--budget", type=int, default=presentations.Budget().max_area)
    q.add_argument("--max-len", type=int, default=presentations.Budget().max_len)
    q.add_argument("--witness", action="store_true")
    q.set_defaults(func=cmd_area)

    q = sub.add_parser("trapezium", help="trapezium of a computation")
    machine_arg(q)
    q.add_argument("--start", required=True)
    q.add_argument("--history", required=True)
    q.add_argument("--dot")
    q.set_defaults(func=cmd_trapezium)

    q = sub.add_parser("disc", help="disc with one hub cell for an accepted input")
    machine_arg(q)
    q.add_argument("--start", required=True, help="start configuration of the base machine")
    q.add_argument("--copies", type=int, default=grouplab.MIN_COPIES)
    q.add_argument("--dot")
    _add_bounds(q)
    q.set_defaults(func=cmd_disc)

    q = sub.add_parser("bench", help="minimal accepting time and space per input")
    machine_arg(q)
    q.add_argument("--inputs", required=True)
    q.add_argument("--csv")
    q.add_argument("--accept-states")
    _add_bounds(q)
    q.set_defaults(func=cmd_bench)

    q = sub.add_parser("fit", help="equivalence fit of a CSV column against a candidate")
    q.add_argument("--csv", required=True)
    q.add_argument("--candidate", required=True)
    q.add_argument("--cmax", type=int, default=100)
    q.add_argument("--column", choices=("steps", "space"), default="steps")
    q.set_defaults(func=cmd_fit)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        # parse errors, unknown letters, inadmissible words, bad machines
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
