"""Multi-section Turing machines with literal replacement semantics.

Configurations reuse :class:`~smkit.smachine.Configuration`: one state
letter per section boundary and positive tape words in between.  A command
``[U_1 -> V_1, ..., U_N -> V_N]`` applies when, for every part, the state
letter matches, the left word of ``U_i`` is a suffix of the segment to the
left and the right word of ``U_i`` is a prefix of the segment to the right.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .smachine import (
    Bounds,
    ComposedMachine,
    Computation,
    Configuration,
    SMachine,
    SRule,
    Side,
    ValidationError,
    Violation,
    adding_checker,
    compose,
    explore,
    validate,
)
from .words import EMPTY, Word

__all__ = [
    "CommandNotApplicable",
    "CompiledMachine",
    "TMCommand",
    "TMachine",
    "TranscriptionError",
    "anbn_machine",
    "command_closure",
    "compile",
    "compiled_accepts",
    "compiled_search",
    "erase_machine",
    "increment_machine",
    "inverse_command",
    "lift_to_symmetric",
    "s_of",
    "symmetrize_tm",
    "tm_accepts",
    "tm_computations",
    "tm_step",
    "tm_successors",
    "validate_tm",
]


class CommandNotApplicable(ValueError):
    pass


class TranscriptionError(ValueError):
    pass


@dataclass(frozen=True)
class TMCommand:
    name: str
    U: tuple[Side, ...]
    V: tuple[Side, ...]

    def __str__(self) -> str:
        return f"{self.name}: [" + " ; ".join(f"{u} -> {v}" for u, v in zip(self.U, self.V)) + "]"


def inverse_command(cmd: TMCommand, name: str | None = None) -> TMCommand:
    return TMCommand(name or _inverse_name(cmd.name), cmd.V, cmd.U)


def _inverse_name(name: str) -> str:
    return name[: -len(".inv")] if name.endswith(".inv") else name + ".inv"


@dataclass(frozen=True, eq=False)
class TMachine:
    Q: tuple[frozenset[str], ...]
    Y: tuple[frozenset[str], ...]
    commands: tuple[TMCommand, ...]
    start: tuple[str, ...]
    accept: Configuration
    input_section: int = 1
    name: str = "T"
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def N(self) -> int:
        return len(self.Q)

    @property
    def input_alphabet(self) -> frozenset[str]:
        return self.Y[self.input_section - 1]

    def command(self, name: str) -> TMCommand:
        for c in self.commands:
            if c.name == name:
                return c
        raise KeyError(f"machine {self.name} has no command {name!r}")

    def encode(self, w: Word | Iterable[str]) -> Configuration:
        w = w if isinstance(w, Word) else Word((a, 1) for a in w)
        if not w.is_positive():
            raise ValueError(f"input {w} is not a positive word")
        if not w.letters() <= self.input_alphabet:
            raise ValueError(f"input {w} is not over the input alphabet {sorted(self.input_alphabet)}")
        tapes = [EMPTY] * (self.N - 1)
        tapes[self.input_section - 1] = w
        return Configuration(self.start, tuple(tapes))


def validate_tm(T: TMachine) -> list[Violation]:
    out: list[Violation] = []
    if len(T.Y) != T.N - 1:
        out.append(Violation(None, None, "wrong-tape-count"))
        return out
    if len(T.start) != T.N or any(s not in T.Q[i] for i, s in enumerate(T.start)):
        out.append(Violation(None, None, "bad-start-states"))
    if not 1 <= T.input_section <= T.N - 1:
        out.append(Violation(None, None, "bad-input-section"))
    names = [c.name for c in T.commands]
    if len(set(names)) != len(names):
        out.append(Violation(None, None, "duplicate-command-names"))
    for c in T.commands:
        if len(c.U) != T.N or len(c.V) != T.N:
            out.append(Violation(c.name, None, "wrong-part-count"))
            continue
        for i in range(T.N):
            for side_name, side in (("U", c.U[i]), ("V", c.V[i])):
                if side.state not in T.Q[i]:
                    out.append(Violation(c.name, i + 1, "wrong-state-letter", f"{side_name}: {side.state}"))
                left_ok = T.Y[i - 1] if i > 0 else frozenset()
                right_ok = T.Y[i] if i < T.N - 1 else frozenset()
                if not (side.left.is_positive() and side.right.is_positive()):
                    out.append(Violation(c.name, i + 1, "negative-letter", side_name))
                if not side.left.letters() <= left_ok or not side.right.letters() <= right_ok:
                    out.append(Violation(c.name, i + 1, "tape-letters", side_name))
    return out


def _step(U: Sequence[Side], V: Sequence[Side], c: Configuration) -> Configuration | None:
    if c.states != tuple(s.state for s in U):
        return None
    tapes = []
    for j, t in enumerate(c.tapes):
        pre, suf = U[j].right, U[j + 1].left
        if len(pre) + len(suf) > len(t) or t[: len(pre)] != pre or t[len(t) - len(suf) :] != suf:
            return None
        mid = t[len(pre) : len(t) - len(suf)]
        tapes.append(Word(tuple(V[j].right) + tuple(mid) + tuple(V[j + 1].left)))
    return Configuration(tuple(s.state for s in V), tuple(tapes))


def tm_step(T: TMachine, c: Configuration, cmd: TMCommand | str, sign: int = 1) -> Configuration:
    cmd = T.command(cmd) if isinstance(cmd, str) else cmd
    U, V = (cmd.U, cmd.V) if sign == 1 else (cmd.V, cmd.U)
    out = _step(U, V, c)
    if out is None:
        raise CommandNotApplicable(f"command {cmd.name} does not apply to {c}")
    return out


def tm_successors(T: TMachine, c: Configuration, symmetric: bool = False) -> Iterator[tuple[tuple[str, int], Configuration]]:
    """Commands in declaration order; with ``symmetric`` each is followed by its inverse."""
    for cmd in T.commands:
        for sign in (1, -1) if symmetric else (1,):
            U, V = (cmd.U, cmd.V) if sign == 1 else (cmd.V, cmd.U)
            d = _step(U, V, c)
            if d is not None:
                yield (cmd.name, sign), d


def tm_accepts(T: TMachine, w, max_steps: int = 10_000, max_frontier: int = 1_000_000) -> Computation | None:
    """Shortest forward computation from ``encode(w)`` to the accept configuration."""
    start = T.encode(w)
    parent: dict[Configuration, tuple | None] = {start: None}
    frontier = deque([(start, 0)])
    found = start if start == T.accept else None
    while frontier and found is None:
        c, d = frontier.popleft()
        if d >= max_steps:
            continue
        for lab, e in tm_successors(T, c):
            if e in parent:
                continue
            parent[e] = (c, lab)
            if e == T.accept:
                found = e
                break
            if len(parent) > max_frontier:
                return None
            frontier.append((e, d + 1))
    if found is None:
        return None
    trace, hist = [found], []
    while parent[trace[-1]] is not None:
        prev, lab = parent[trace[-1]]
        hist.append(lab)
        trace.append(prev)
    trace.reverse()
    hist.reverse()
    return Computation(start, tuple(hist), tuple(trace))


def tm_computations(T: TMachine, start: Configuration, length: int, symmetric: bool = False) -> set[tuple]:
    """All (history, trace) pairs of computations of exactly ``length`` steps.

    Immediate backtracking (a command followed by its inverse) is excluded,
    matching the reduced histories the S-machine simulator produces.
    """
    out: set[tuple] = set()

    def go(hist, trace):
        if len(hist) == length:
            out.add((tuple(hist), tuple(trace)))
            return
        for lab, d in tm_successors(T, trace[-1], symmetric):
            if hist and hist[-1] == (lab[0], -lab[1]):
                continue
            hist.append(lab)
            trace.append(d)
            go(hist, trace)
            hist.pop()
            trace.pop()

    go([], [start])
    return out


def command_closure(T: TMachine) -> TMachine:
    """``T`` with a formal inverse added for every command lacking one."""
    pairs = {(c.U, c.V) for c in T.commands}
    extra = [inverse_command(c) for c in T.commands if (c.V, c.U) not in pairs]
    return TMachine(T.Q, T.Y, T.commands + tuple(extra), T.start, T.accept, T.input_section, T.name + "^sym", dict(T.meta))


# ---------------------------------------------------------------- symmetrization


def _idle(state: str) -> Side:
    return Side(EMPTY, state, EMPTY)


def symmetrize_tm(T: TMachine) -> TMachine:
    """A machine closed under inverses that accepts what ``T`` accepts.

    Two parts are appended: a cursor ``G`` (phase letters ``g``, ``x``,
    ``e``) and an end letter ``E``.  The segment right of ``G`` holds the
    guessed history still to run, the one left of it the history already
    run.  Phases: guess a history, switch, execute it letter by letter
    (moving the cursor), and once ``T`` sits in its accept states, erase
    the accept tapes and the executed history.  The accept configuration
    has every tape empty.

    Executed commands can only be undone in the order they were run, so in
    the accept component ``T``'s configuration is always reachable from
    the input.  The equivalence is exact when ``T``'s accept configuration
    admits no forward command and ``T`` is deterministic; the bundled
    machines satisfy both.
    """
    bad = validate_tm(T)
    if bad:
        raise ValidationError(bad)
    used = set().union(*T.Q) | set().union(*T.Y) | {c.name for c in T.commands}

    def fresh(name: str) -> str:
        while name in used:
            name += "'"
        used.add(name)
        return name

    g, x, e, E = fresh("g"), fresh("x"), fresh("e"), fresh("E")
    hist = {c.name: fresh(f"h.{c.name}") for c in T.commands}
    H = frozenset(hist.values())
    Q = T.Q + (frozenset({g, x, e}), frozenset({E}))
    Y = T.Y + (H, H)
    start_T = [_idle(s) for s in T.start]
    cmds: list[TMCommand] = []

    names: dict[tuple[str, ...], str] = {}

    def add(key, U, V):
        c = TMCommand(fresh(".".join(key)), tuple(U), tuple(V))
        names[key] = c.name
        cmds.append(c)

    for c in T.commands:
        h = Word(((hist[c.name], 1),))
        add(("guess", c.name), start_T + [_idle(g), _idle(E)], start_T + [Side(EMPTY, g, h), _idle(E)])
    add(("switch",), start_T + [_idle(g), _idle(E)], start_T + [_idle(x), _idle(E)])
    for c in T.commands:
        h = Word(((hist[c.name], 1),))
        add(("run", c.name), list(c.U) + [Side(EMPTY, x, h), _idle(E)], list(c.V) + [Side(h, x, EMPTY), _idle(E)])
    acc = T.accept
    wU = [Side(EMPTY, s, acc.tapes[i] if i < len(acc.tapes) else EMPTY) for i, s in enumerate(acc.states)]
    wV = [_idle(s) for s in acc.states]
    add(("erase",), wU + [_idle(x), _idle(E)], wV + [_idle(e), _idle(E)])
    for c in T.commands:
        h = Word(((hist[c.name], 1),))
        add(("clear", c.name), wV + [Side(h, e, EMPTY), _idle(E)], wV + [_idle(e), _idle(E)])
    forward = list(cmds)
    for c in forward:
        cmds.append(TMCommand(fresh(_inverse_name(c.name)), c.V, c.U))
    accept = Configuration(acc.states + (e, E), tuple(EMPTY for _ in range(len(Y))))
    meta = {
        "phases": {"guess": g, "execute": x, "erase": e},
        "end": E,
        "history_letters": dict(hist),
        "commands": names,
        "base": T.name,
    }
    return TMachine(Q, Y, tuple(cmds), tuple(T.start) + (g, E), accept, T.input_section, T.name + "'", meta)


def lift_to_symmetric(T2: TMachine, comp: Computation) -> Computation:
    """The run of ``symmetrize_tm(T)`` that guesses, executes and erases ``comp``."""
    names = T2.meta["commands"]
    for _, sign in comp.history:
        if sign != 1:
            raise ValueError("only forward computations of the base machine can be lifted")
    cmds = [n for n, _ in comp.history]
    plan = [names[("guess", c)] for c in reversed(cmds)] + [names[("switch",)]]
    plan += [names[("run", c)] for c in cmds] + [names[("erase",)]]
    plan += [names[("clear", c)] for c in reversed(cmds)]
    start = Configuration(comp.start.states + T2.start[-2:], comp.start.tapes + (EMPTY, EMPTY))
    trace = [start]
    for name in plan:
        trace.append(tm_step(T2, trace[-1], name))
    return Computation(start, tuple((n, 1) for n in plan), tuple(trace))


def s_of(T: TMachine) -> SMachine:
    """Read ``T`` as an S-machine: same letters, one rule per command, full commuting sets."""
    rules = []
    for c in T.commands:
        rules.append(SRule(c.name, c.U, c.V, tuple(T.Y)))
    S = SMachine(tuple(T.Q), tuple(T.Y), tuple(rules), T.accept, name=f"S({T.name})")
    bad = validate(S)
    if bad:
        first = bad[0]
        raise TranscriptionError(f"command {first.rule} violates the rule shape: {first}")
    return S


# ---------------------------------------------------------------- compilation


@dataclass(frozen=True, eq=False)
class CompiledMachine:
    source: TMachine
    symmetric: TMachine
    transcribed: SMachine
    composed: ComposedMachine

    @property
    def machine(self) -> SMachine:
        return self.composed.machine

    @property
    def accept(self) -> Configuration:
        return self.composed.lift(self.symmetric.accept)

    def encode(self, w) -> Configuration:
        return self.composed.lift(self.symmetric.encode(w))


def compile(T: TMachine, checker_factory=adding_checker) -> CompiledMachine:
    T2 = symmetrize_tm(T)
    S = s_of(T2)
    return CompiledMachine(T, T2, S, compose(S, checker_factory))


def compiled_accepts(C: CompiledMachine, w, max_steps: int = 10_000, max_frontier: int = 200_000) -> Computation | None:
    """An accepting computation of the compiled machine on ``w``, or ``None``.

    The source machine's run is found by search and lifted to the symmetric
    machine.  Each step of that run is expanded into its guarded composite
    sequence, with every checker run computed on its own segment, and the
    result is replayed rule by rule before it is returned.
    """
    comp = tm_accepts(C.source, w, max_steps, max_frontier)
    if comp is None:
        return None
    base = lift_to_symmetric(C.symmetric, comp)
    base.check(C.transcribed)
    return C.composed.lift_computation(base)


def compiled_search(C: CompiledMachine, w, bounds: Bounds = Bounds()):
    """Blind breadth-first search in the compiled machine (used for the converse check)."""
    return explore(C.machine, C.encode(w), C.accept, bounds)


# ---------------------------------------------------------------- bundled machines


def _letters(alphabet: Iterable[str]) -> list[str]:
    return sorted(set(alphabet))


def erase_machine(alphabet: Iterable[str] = ("a",)) -> TMachine:
    """Deletes its input one letter at a time, then accepts with empty tape."""
    A = _letters(alphabet)
    cmds = []
    for a in A:
        w = Word(((a, 1),))
        cmds.append(TMCommand(f"del.{a}", (_idle("L"), Side(w, "q", EMPTY), _idle("R")), (_idle("L"), _idle("q"), _idle("R"))))
    Y = (frozenset(A), frozenset(A))
    acc = Configuration(("L", "q", "R"), (EMPTY, EMPTY))
    return TMachine((frozenset({"L"}), frozenset({"q"}), frozenset({"R"})), Y, tuple(cmds), ("L", "q", "R"), acc, 1, "ERASE")


def increment_machine() -> TMachine:
    """Appends one ``u`` to a unary input, then clears the tape."""
    one = Word((("u", 1),))
    cmds = (
        TMCommand("inc", (_idle("L"), _idle("q"), _idle("R")), (_idle("L"), Side(one, "f", EMPTY), _idle("R"))),
        TMCommand("del", (_idle("L"), Side(one, "f", EMPTY), _idle("R")), (_idle("L"), _idle("f"), _idle("R"))),
    )
    Y = (frozenset({"u"}), frozenset({"u"}))
    acc = Configuration(("L", "f", "R"), (EMPTY, EMPTY))
    Q = (frozenset({"L"}), frozenset({"q", "f"}), frozenset({"R"}))
    return TMachine(Q, Y, cmds, ("L", "q", "R"), acc, 1, "INC")


def anbn_machine() -> TMachine:
    """Accepts ``a^n b^n``: strips an ``a`` at the left end and a ``b`` at the head together."""
    a, b = Word((("a", 1),)), Word((("b", 1),))
    cmds = (
        TMCommand("pair", (Side(EMPTY, "L", a), Side(b, "q", EMPTY), _idle("R")), (_idle("L"), _idle("q"), _idle("R"))),
    )
    Y = (frozenset({"a", "b"}), frozenset({"a", "b"}))
    acc = Configuration(("L", "q", "R"), (EMPTY, EMPTY))
    return TMachine((frozenset({"L"}), frozenset({"q"}), frozenset({"R"})), Y, cmds, ("L", "q", "R"), acc, 1, "ANBN")


BUNDLED = {"erase": erase_machine, "increment": increment_machine, "anbn": anbn_machine}
