"""S-machines: rules, configurations and their exact semantics.

A configuration is ``q1 t1 q2 t2 ... t_{N-1} qN`` - one state letter per
part, tape segment ``t_i`` over ``Y_i`` between parts ``i`` and ``i+1``.
Applying a rule ``[U1 -> V1, ..., UN -> VN]`` is conjugation by its first
brother letter in the HNN extension, which comes down to the residue
formula: with ``u_i`` the tape part right of the state letter in ``U_i`` and
``v_i`` the tape part left of the state letter in ``U_{i+1}``,

    z_i = reduce(u_i^-1 t_i v_i^-1)

must be a word over ``Y_i(theta)`` and the new segment is
``reduce(u'_i z_i v'_i)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

from .presentations import Presentation, symmetrize
from .words import EMPTY, Alphabet, Letter, Word, concat, invert, join, parse_word

__all__ = [
    "AdmissibilityError",
    "Bounds",
    "Checker",
    "ComposedMachine",
    "Computation",
    "Configuration",
    "NotApplicableError",
    "SMachine",
    "SRule",
    "SearchResult",
    "Side",
    "ValidationError",
    "Violation",
    "adding_checker",
    "adding_machine",
    "applicable",
    "apply",
    "brother",
    "compose",
    "explore",
    "format_history",
    "invert_rule",
    "parse_history",
    "presentation_of",
    "residues",
    "run",
    "validate",
]


class AdmissibilityError(ValueError):
    pass


class NotApplicableError(ValueError):
    def __init__(self, rule: str, part: int, reason: str):
        super().__init__(f"rule {rule} not applicable at part {part}: {reason}")
        self.rule = rule
        self.part = part


class ValidationError(ValueError):
    def __init__(self, violations: Sequence["Violation"]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class Side:
    """One component ``v k u`` of a rule side: tape word, state letter, tape word."""

    left: Word
    state: str
    right: Word

    @property
    def word(self) -> Word:
        return join(self.left, Word(((self.state, 1),)), self.right)

    def __str__(self) -> str:
        parts = [str(self.left)] if self.left else []
        parts.append(self.state)
        if self.right:
            parts.append(str(self.right))
        return " ".join(parts)


@dataclass(frozen=True)
class SRule:
    name: str
    U: tuple[Side, ...]
    V: tuple[Side, ...]
    # Y_i(theta) for each tape segment, explicit sets
    commuting: tuple[frozenset[str], ...]

    def __str__(self) -> str:
        body = " ; ".join(f"{u} -> {v}" for u, v in zip(self.U, self.V))
        return f"{self.name}: [{body}]"


def invert_rule(rule: SRule) -> SRule:
    return SRule(rule.name, rule.V, rule.U, rule.commuting)


class Configuration(NamedTuple):
    states: tuple[str, ...]
    tapes: tuple[Word, ...]

    @property
    def word(self) -> Word:
        out: list = []
        for i, q in enumerate(self.states):
            out.append((q, 1))
            if i < len(self.tapes):
                out.extend(self.tapes[i])
        return Word(out)

    def __len__(self) -> int:  # type: ignore[override]
        return len(self.states) + sum(len(t) for t in self.tapes)

    def __str__(self) -> str:
        return str(self.word)

    def is_positive(self) -> bool:
        return all(t.is_positive() for t in self.tapes)


@dataclass(frozen=True)
class Violation:
    rule: str | None
    part: int | None
    kind: str
    detail: str = ""

    def __str__(self) -> str:
        where = []
        if self.rule is not None:
            where.append(f"rule {self.rule}")
        if self.part is not None:
            where.append(f"part {self.part}")
        loc = ", ".join(where) or "machine"
        return f"{loc}: {self.kind}" + (f" ({self.detail})" if self.detail else "")


SignedRule = tuple[str, int]


@dataclass(frozen=True)
class _Move:
    # a rule with its sign folded in, ready for fast application
    label: SignedRule
    req: tuple[str, ...]
    out: tuple[str, ...]
    uinv: tuple[Word, ...]
    vinv: tuple[Word, ...]
    allowed: tuple[frozenset[str] | None, ...]
    new_left: tuple[Word, ...]
    new_right: tuple[Word, ...]


@dataclass(frozen=True, eq=False)
class SMachine:
    Q: tuple[frozenset[str], ...]
    Y: tuple[frozenset[str], ...]
    rules: tuple[SRule, ...]
    accept: Configuration | None = None
    name: str = "S"
    _moves: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.Q) < 1:
            raise ValueError("an S-machine needs at least one part")
        if len(self.Y) != len(self.Q) - 1:
            raise ValueError(f"{len(self.Q)} parts need {len(self.Q) - 1} tape alphabets, got {len(self.Y)}")
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate rule names: {dup}")

    @property
    def N(self) -> int:
        return len(self.Q)

    @property
    def rule_map(self) -> dict[str, SRule]:
        return {r.name: r for r in self.rules}

    def rule(self, name: str) -> SRule:
        try:
            return self.rule_map[name]
        except KeyError:
            raise KeyError(f"machine {self.name} has no rule {name!r}") from None

    @property
    def state_letters(self) -> frozenset[str]:
        return frozenset().union(*self.Q)

    @property
    def tape_letters(self) -> frozenset[str]:
        return frozenset().union(*self.Y) if self.Y else frozenset()

    def signed_rules(self) -> list[SignedRule]:
        return [(r.name, s) for r in self.rules for s in (1, -1)]

    def part_of(self, state: str) -> int:
        for i, q in enumerate(self.Q):
            if state in q:
                return i
        raise AdmissibilityError(f"{state!r} is not a state letter of {self.name}")

    # -- configurations

    def configuration(self, w: Word | str) -> Configuration:
        """Split an admissible word into states and tape segments."""
        if isinstance(w, str):
            w = parse_word(w)
        states: list[str] = []
        tapes: list[list] = []
        for name, sign in w:
            if len(states) < self.N and name in self.Q[len(states)]:
                if sign != 1:
                    raise AdmissibilityError(f"state letter {name} occurs inverted")
                states.append(name)
                tapes.append([])
                continue
            if not states:
                raise AdmissibilityError(f"{w} does not start with a letter of Q1")
            seg = len(states) - 1
            if seg >= self.N - 1 or name not in self.Y[seg]:
                raise AdmissibilityError(f"letter {name} not allowed in segment {seg + 1} of {w}")
            tapes[-1].append((name, sign))
        if len(states) != self.N:
            raise AdmissibilityError(f"{w} has {len(states)} state letters, expected {self.N}")
        return Configuration(tuple(states), tuple(Word(t) for t in tapes[:-1]))

    def check_admissible(self, c: Configuration) -> None:
        if len(c.states) != self.N or len(c.tapes) != self.N - 1:
            raise AdmissibilityError(f"configuration shape does not match {self.N} parts")
        for i, q in enumerate(c.states):
            if q not in self.Q[i]:
                raise AdmissibilityError(f"{q} is not in Q{i + 1}")
        for i, t in enumerate(c.tapes):
            for name, _ in t:
                if name not in self.Y[i]:
                    raise AdmissibilityError(f"letter {name} not in Y{i + 1}")
            for a, b in zip(t, t[1:]):
                if a[0] == b[0] and a[1] == -b[1]:
                    raise AdmissibilityError(f"segment {i + 1} is not freely reduced")

    def move(self, label: SignedRule) -> _Move:
        m = self._moves.get(label)
        if m is None:
            m = _compile_move(self, self.rule(label[0]), label[1])
            self._moves[label] = m
        return m

    def moves_from(self, states: tuple[str, ...]) -> list[_Move]:
        index = self._moves.get("__index__")
        if index is None:
            index = {}
            for lab in self.signed_rules():
                m = self.move(lab)
                index.setdefault(m.req, []).append(m)
            self._moves["__index__"] = index
        return index.get(states, [])

    @property
    def alphabet(self) -> Alphabet:
        letters = [Letter(q, "state") for q in self.state_letters]
        letters += [Letter(a, "tape") for a in self.tape_letters]
        return Alphabet(letters)


def _compile_move(S: SMachine, rule: SRule, sign: int) -> _Move:
    U, V = (rule.U, rule.V) if sign == 1 else (rule.V, rule.U)
    n = S.N
    allowed = []
    for i in range(n - 1):
        ys = rule.commuting[i]
        allowed.append(None if ys >= S.Y[i] else ys)
    return _Move(
        label=(rule.name, sign),
        req=tuple(s.state for s in U),
        out=tuple(s.state for s in V),
        uinv=tuple(invert(U[i].right) for i in range(n - 1)),
        vinv=tuple(invert(U[i + 1].left) for i in range(n - 1)),
        allowed=tuple(allowed),
        new_left=tuple(V[i].right for i in range(n - 1)),
        new_right=tuple(V[i + 1].left for i in range(n - 1)),
    )


def _residues(m: _Move, c: Configuration) -> tuple[Word, ...] | int:
    """Residues, or the index of the first failing segment."""
    zs = []
    for i, t in enumerate(c.tapes):
        z = concat(concat(m.uinv[i], t), m.vinv[i])
        ys = m.allowed[i]
        if ys is not None:
            for name, _ in z:
                if name not in ys:
                    return i
        zs.append(z)
    return tuple(zs)


def _apply(m: _Move, c: Configuration) -> Configuration | None:
    if c.states != m.req:
        return None
    zs = _residues(m, c)
    if isinstance(zs, int):
        return None
    tapes = tuple(concat(concat(m.new_left[i], z), m.new_right[i]) for i, z in enumerate(zs))
    return Configuration(m.out, tapes)


def _label(rule: SRule | SignedRule | str) -> SignedRule:
    if isinstance(rule, SRule):
        return (rule.name, 1)
    if isinstance(rule, str):
        return parse_history(rule)[0]
    return rule


def residues(S: SMachine, rule: SRule | SignedRule | str, c: Configuration) -> tuple[Word, ...] | None:
    """The residues ``z_1..z_{N-1}`` when the rule applies, else ``None``."""
    S.check_admissible(c)
    m = S.move(_label(rule))
    if c.states != m.req:
        return None
    zs = _residues(m, c)
    return None if isinstance(zs, int) else zs


def applicable(S: SMachine, rule: SRule | SignedRule | str, c: Configuration) -> bool:
    return residues(S, rule, c) is not None


def apply(S: SMachine, rule: SRule | SignedRule | str, c: Configuration) -> Configuration:
    S.check_admissible(c)
    lab = _label(rule)
    m = S.move(lab)
    for i, (have, need) in enumerate(zip(c.states, m.req)):
        if have != need:
            raise NotApplicableError(lab[0], i + 1, f"state {have} but rule needs {need}")
    zs = _residues(m, c)
    if isinstance(zs, int):
        raise NotApplicableError(lab[0], zs + 1, "residue leaves the commuting set")
    out = _apply(m, c)
    assert out is not None
    return out


def validate(S: SMachine) -> list[Violation]:
    out: list[Violation] = []
    for i, q in enumerate(S.Q):
        if not q:
            out.append(Violation(None, i + 1, "empty-state-set"))
        for j in range(i + 1, S.N):
            if q & S.Q[j]:
                out.append(Violation(None, i + 1, "state-sets-overlap", f"with Q{j + 1}: {sorted(q & S.Q[j])}"))
    tape = S.tape_letters
    if tape & S.state_letters:
        out.append(Violation(None, None, "state-tape-overlap", str(sorted(tape & S.state_letters))))
    for r in S.rules:
        if len(r.U) != S.N or len(r.V) != S.N:
            out.append(Violation(r.name, None, "wrong-part-count"))
            continue
        if len(r.commuting) != S.N - 1:
            out.append(Violation(r.name, None, "wrong-commuting-count"))
            continue
        for i in range(S.N):
            for side_name, side in (("U", r.U[i]), ("V", r.V[i])):
                if side.state not in S.Q[i]:
                    out.append(Violation(r.name, i + 1, "wrong-state-letter", f"{side_name}: {side.state}"))
                left_ok = S.Y[i - 1] if i > 0 else frozenset()
                right_ok = S.Y[i] if i < S.N - 1 else frozenset()
                if not side.left.letters() <= left_ok:
                    out.append(Violation(r.name, i + 1, "left-tape-letters", f"{side_name}: {side.left}"))
                if not side.right.letters() <= right_ok:
                    out.append(Violation(r.name, i + 1, "right-tape-letters", f"{side_name}: {side.right}"))
        for i, ys in enumerate(r.commuting):
            if not ys <= S.Y[i]:
                out.append(Violation(r.name, i + 1, "commuting-set", str(sorted(ys - S.Y[i]))))
    if S.accept is not None:
        try:
            S.check_admissible(S.accept)
        except AdmissibilityError as exc:
            out.append(Violation(None, None, "accept-not-admissible", str(exc)))
    return out


# ---------------------------------------------------------------- computations


def format_history(history: Iterable[SignedRule]) -> str:
    return " ".join(n if s == 1 else f"{n}^-1" for n, s in history) or "1"


def parse_history(text: str) -> list[SignedRule]:
    return [(n, s) for n, s in parse_word(text)]


@dataclass(frozen=True)
class Computation:
    start: Configuration
    history: tuple[SignedRule, ...]
    trace: tuple[Configuration, ...]

    @property
    def time(self) -> int:
        return len(self.history)

    @property
    def space(self) -> int:
        return max(len(c) for c in self.trace)

    @property
    def end(self) -> Configuration:
        return self.trace[-1]

    def check(self, S: SMachine) -> None:
        if self.trace[0] != self.start or len(self.trace) != len(self.history) + 1:
            raise ValueError("trace does not match start/history")
        for k, lab in enumerate(self.history):
            nxt = apply(S, lab, self.trace[k])
            if nxt != self.trace[k + 1]:
                raise ValueError(f"step {k}: {format_history([lab])} gives {nxt}, trace has {self.trace[k + 1]}")

    def __str__(self) -> str:
        return "\n".join(
            [str(self.trace[0])]
            + [f"  --{format_history([lab])}--> {c}" for lab, c in zip(self.history, self.trace[1:])]
        )


def replay_history(S: SMachine, start: Configuration, history: Iterable[SignedRule | str]) -> Computation:
    trace = [start]
    hist = []
    for lab in history:
        lab = _label(lab)
        trace.append(apply(S, lab, trace[-1]))
        hist.append(lab)
    return Computation(start, tuple(hist), tuple(trace))


@dataclass(frozen=True)
class Bounds:
    max_steps: int = 100_000
    max_space: int = 64
    max_frontier: int = 1_000_000


@dataclass(frozen=True)
class SearchResult:
    computation: Computation | None
    explored: int
    # True when the whole bounded space was enumerated without the frontier cap
    exhausted: bool
    depth: int

    @property
    def found(self) -> bool:
        return self.computation is not None


Target = Configuration | Callable[[Configuration], bool]


def explore(S: SMachine, start: Configuration, target: Target, bounds: Bounds = Bounds()) -> SearchResult:
    """Breadth-first search over signed rule applications.

    Rules are tried in declaration order, ``+`` before ``-``.  Configurations
    longer than ``bounds.max_space`` are discarded; the search stops early if
    more than ``bounds.max_frontier`` configurations have been discovered.
    """
    S.check_admissible(start)
    hit = target if callable(target) else (lambda c, t=target: c == t)
    parent: dict[Configuration, tuple[Configuration, SignedRule] | None] = {start: None}
    if hit(start):
        return SearchResult(_rebuild(parent, start), 1, False, 0)
    layer = [start]
    depth = 0
    space = bounds.max_space
    capped = False
    while layer and depth < bounds.max_steps:
        depth += 1
        nxt: list[Configuration] = []
        for c in layer:
            back = parent[c]
            undo = (back[1][0], -back[1][1]) if back is not None else None
            for m in S.moves_from(c.states):
                if m.label == undo:
                    continue
                d = _apply(m, c)
                if d is None or d in parent or len(d) > space:
                    continue
                parent[d] = (c, m.label)
                if hit(d):
                    return SearchResult(_rebuild(parent, d), len(parent), False, depth)
                nxt.append(d)
                if len(parent) > bounds.max_frontier:
                    capped = True
                    break
            if capped:
                break
        if capped:
            break
        layer = nxt
    exhausted = not capped and not layer
    return SearchResult(None, len(parent), exhausted, depth)


def _rebuild(parent: dict, end: Configuration) -> Computation:
    trace = [end]
    hist = []
    cur = end
    while parent[cur] is not None:
        prev, lab = parent[cur]
        hist.append(lab)
        trace.append(prev)
        cur = prev
    trace.reverse()
    hist.reverse()
    return Computation(trace[0], tuple(hist), tuple(trace))


def run(S: SMachine, start: Configuration, target: Target, bounds: Bounds = Bounds()) -> Computation | None:
    """Shortest computation from ``start`` to ``target`` within bounds, else ``None``."""
    return explore(S, start, target, bounds).computation


# ---------------------------------------------------------------- presentation


def brother(rule: str, i: int) -> str:
    """Name of the i-th brother letter (1-based) of a rule."""
    return f"{rule}#{i}"


def q_relator(rule: SRule, i: int, N: int) -> Word:
    """``U_i theta_{i+1} V_i^-1 theta_i^-1`` for part ``i`` (0-based)."""
    t_i = Word(((brother(rule.name, i + 1), 1),))
    t_next = Word(((brother(rule.name, (i + 1) % N + 1), 1),))
    return join(rule.U[i].word, t_next, invert(rule.V[i].word), invert(t_i))


def a_relator(rule: SRule, segment: int, a: str) -> Word:
    """Commutation of tape letter ``a`` of segment ``segment`` (0-based).

    Segment ``i`` sits between parts ``i`` and ``i+1``, so in the conjugate
    ``theta_1^-1 W theta_1`` it is flanked by brother ``i+2`` (1-based).
    """
    t = Word(((brother(rule.name, segment + 2), 1),))
    x = Word(((a, 1),))
    return join(t, x, invert(t), invert(x))


def presentation_of(S: SMachine) -> Presentation:
    bad = validate(S)
    if bad:
        raise ValidationError(bad)
    letters = [Letter(q, "state") for q in S.state_letters]
    letters += [Letter(a, "tape") for a in S.tape_letters]
    rels: list[Word] = []
    for r in S.rules:
        letters += [Letter(brother(r.name, i + 1), "rule-label") for i in range(S.N)]
        rels += [q_relator(r, i, S.N) for i in range(S.N)]
        for seg, ys in enumerate(r.commuting):
            rels += [a_relator(r, seg, a) for a in sorted(ys)]
    return symmetrize(Alphabet(letters), rels)


# ---------------------------------------------------------------- adding machine


def _w(*letters: tuple[str, int]) -> Word:
    return Word(letters)


def _zero(a: str) -> str:
    return f"{a}0"


def _one(a: str) -> str:
    return f"{a}1"


def _adding(A: Iterable[str], zero=_zero, one=_one) -> SMachine:
    A = sorted(set(A))
    A0 = frozenset(zero(a) for a in A)
    A1 = frozenset(one(a) for a in A)
    Y1 = A0 | A1
    Lside = Side(EMPTY, "L", EMPTY)
    Rside = Side(EMPTY, "R", EMPTY)

    def rule(name, U2, V2, y1=Y1, y2=A0):
        return SRule(name, (Lside, U2, Rside), (Lside, V2, Rside), (frozenset(y1), frozenset(y2)))

    # plain names like r1a unless some letter makes them ambiguous
    plain = [f"r{k}{a}" for k in ("1", "12", "2", "3") for a in A] + ["r21", "r13"]
    sep = "" if len(set(plain)) == len(plain) else "."
    rules: list[SRule] = []
    for a in A:
        a0, a1 = zero(a), one(a)
        rules.append(rule(f"r1{sep}{a}", Side(EMPTY, "p1", EMPTY), Side(_w((a1, -1)), "p1", _w((a0, 1)))))
    for a in A:
        a0, a1 = zero(a), one(a)
        rules.append(rule(f"r12{sep}{a}", Side(EMPTY, "p1", EMPTY), Side(_w((a0, -1), (a1, 1)), "p2", EMPTY)))
    for a in A:
        a0 = zero(a)
        rules.append(rule(f"r2{sep}{a}", Side(EMPTY, "p2", EMPTY), Side(_w((a0, 1)), "p2", _w((a0, -1)))))
    rules.append(rule("r21", Side(EMPTY, "p2", EMPTY), Side(EMPTY, "p1", EMPTY), Y1, frozenset()))
    rules.append(rule("r13", Side(EMPTY, "p1", EMPTY), Side(EMPTY, "p3", EMPTY), frozenset(), A0))
    for a in A:
        a0 = zero(a)
        rules.append(rule(f"r3{sep}{a}", Side(EMPTY, "p3", EMPTY), Side(_w((a0, 1)), "p3", _w((a0, -1))), A0, A0))
    return SMachine(
        Q=(frozenset({"L"}), frozenset({"p1", "p2", "p3"}), frozenset({"R"})),
        Y=(Y1, A0),
        rules=tuple(rules),
        name="Z(" + ",".join(A) + ")",
    )


def adding_machine(A: Iterable[str]) -> SMachine:
    """The adding machine over ``A``; tape letters are ``a0`` and ``a1`` for each ``a``."""
    A = list(A)
    if not A:
        raise ValueError("the adding machine needs a non-empty alphabet")
    return _adding(A)


@dataclass(frozen=True)
class Checker:
    """A three-part machine ``L * R`` used to police one tape segment.

    ``zero`` maps each letter of the policed alphabet to its name on the
    checker's tapes; ``start``/``finish`` are the middle states in which the
    checker is switched on and in which it reports success.
    """

    machine: SMachine
    start: str
    finish: str
    zero: dict[str, str]


def adding_checker(A: Iterable[str]) -> Checker:
    A = sorted(set(A))
    return Checker(_adding(A), "p1", "p3", {a: _zero(a) for a in A})


# ---------------------------------------------------------------- composition


@dataclass(frozen=True, eq=False)
class ComposedMachine:
    """``S o Z`` together with the maps between the two configuration spaces."""

    machine: SMachine
    base: SMachine
    checkers: tuple[Checker, ...]
    renaming: tuple[dict[str, str], ...]
    # (rule, "enter"|"fire"|"exit") and (rule, phase, segment, checker rule) -> composite rule name
    names: dict = field(default_factory=dict, repr=False)
    _runs: dict = field(default_factory=dict, repr=False)

    def lift(self, c: Configuration) -> Configuration:
        """The composite configuration of ``c`` with every checker at rest."""
        states: list[str] = []
        tapes: list[Word] = []
        for i, q in enumerate(c.states):
            states.append(q)
            if i < len(c.tapes):
                states.append(self.renaming[i][self.checkers[i].finish])
                tapes.extend([c.tapes[i], EMPTY])
        return Configuration(tuple(states), tuple(tapes))

    def project(self, c: Configuration) -> Configuration | None:
        """Inverse of :meth:`lift` on resting configurations, else ``None``."""
        base_states = c.states[0::2]
        if any(q not in self.base.Q[i] for i, q in enumerate(base_states)):
            return None
        tapes = []
        for i in range(self.base.N - 1):
            if c.states[2 * i + 1] != self.renaming[i][self.checkers[i].finish] or c.tapes[2 * i + 1]:
                return None
            tapes.append(c.tapes[2 * i])
        return Configuration(tuple(base_states), tuple(tapes))

    @property
    def accept(self) -> Configuration | None:
        return self.machine.accept

    def checker_run(self, j: int, t: Word) -> tuple[SignedRule, ...]:
        """History of checker ``j`` certifying segment content ``t`` (start to finish)."""
        key = (j, t)
        if key not in self._runs:
            ck = self.checkers[j]
            Z = ck.machine
            back = {v: k for k, v in self.renaming[j].items()}
            zt = Word((back.get(n, n), s) for n, s in t)
            L, R = next(iter(Z.Q[0])), next(iter(Z.Q[2]))
            start = Configuration((L, ck.start, R), (zt, EMPTY))
            goal = Configuration((L, ck.finish, R), (zt, EMPTY))
            comp = run(Z, start, goal, Bounds(max_space=len(start) + 1))
            if comp is None:
                raise NotApplicableError(self.base.name, j + 1, f"checker rejects segment {t}")
            self._runs[key] = comp.history
        return self._runs[key]

    def lift_history(self, comp: Computation) -> tuple[SignedRule, ...]:
        """Composite history simulating ``comp`` with both checks around every step."""
        out: list[SignedRule] = []
        for k, (name, sign) in enumerate(comp.history):
            before, after = comp.trace[k], comp.trace[k + 1]
            if sign == 1:
                seq = self._guarded(name, before, after)
            else:
                seq = [(n, -s) for n, s in reversed(self._guarded(name, after, before))]
            out.extend(seq)
        return tuple(out)

    def _guarded(self, name: str, before: Configuration, after: Configuration) -> list[SignedRule]:
        seq: list[SignedRule] = [(self.names[(name, "enter")], 1)]
        for phase, c in (("pre", before), ("post", after)):
            for j, t in enumerate(c.tapes):
                seq += [(self.names[(name, phase, j, zr)], s) for zr, s in self.checker_run(j, t)]
            if phase == "pre":
                seq.append((self.names[(name, "fire")], 1))
        seq.append((self.names[(name, "exit")], 1))
        return seq

    def lift_computation(self, comp: Computation) -> Computation:
        return replay_history(self.machine, self.lift(comp.start), self.lift_history(comp))


def _fresh(name: str, used: set[str]) -> str:
    out = name
    while out in used:
        out += "~"
    used.add(out)
    return out


def compose(S: SMachine, checker_factory: Callable[[frozenset[str]], Checker] = adding_checker) -> ComposedMachine:
    """Insert a checker between every two consecutive state letters of ``S``.

    Each rule ``theta`` of ``S`` becomes a guarded sequence: ``enter`` tags
    the state letters and arms the checkers, the checkers certify the
    current tape, ``fire`` performs ``theta`` and re-arms them, the checkers
    certify the new tape, and ``exit`` drops the tags.  Tags are per rule, so
    running a sequence backwards also passes through both checks.
    """
    bad = validate(S)
    if bad:
        raise ValidationError(bad)
    N = S.N
    used = set(S.state_letters) | set(S.tape_letters) | {r.name for r in S.rules}
    checkers: list[Checker] = []
    renamings: list[dict[str, str]] = []
    zones: list[tuple[frozenset[str], frozenset[str]]] = []
    for i in range(N - 1):
        ck = checker_factory(S.Y[i])
        Z = ck.machine
        if Z.N != 3 or len(Z.Q[0]) != 1 or len(Z.Q[2]) != 1:
            raise ValueError("a checker must have three parts with single end letters")
        ren: dict[str, str] = {v: a for a, v in ck.zero.items()}
        for letter in sorted(Z.Q[1] | Z.tape_letters):
            if letter not in ren:
                ren[letter] = _fresh(f"{letter}~{i + 1}", used)
        for r in Z.rules:
            ren["rule:" + r.name] = _fresh(f"{r.name}~{i + 1}", used)
        checkers.append(ck)
        renamings.append(ren)
        zones.append((frozenset(ren[a] for a in Z.Y[0]), frozenset(ren[a] for a in Z.Y[1])))

    def rn(i: int, w: Word) -> Word:
        return Word((renamings[i][n], s) for n, s in w)

    Q: list[frozenset[str]] = []
    tags: dict[tuple[str, str, int], str] = {}
    for i in range(N):
        letters = set(S.Q[i])
        for r in S.rules:
            for phase, side in (("pre", r.U[i]), ("post", r.V[i])):
                tag = _fresh(f"{side.state}/{r.name}/{phase}", used)
                tags[(r.name, phase, i)] = tag
                letters.add(tag)
        Q.append(frozenset(letters))
        if i < N - 1:
            Q.append(frozenset(renamings[i][q] for q in checkers[i].machine.Q[1]))
    Y: list[frozenset[str]] = []
    for left, right in zones:
        Y.extend([left, right])

    def idle(state: str) -> Side:
        return Side(EMPTY, state, EMPTY)

    def build(name, s_U, s_V, c_U, c_V, commuting):
        U: list[Side] = []
        V: list[Side] = []
        for i in range(N):
            U.append(s_U[i])
            V.append(s_V[i])
            if i < N - 1:
                U.append(c_U[i])
                V.append(c_V[i])
        return SRule(name, tuple(U), tuple(V), tuple(commuting))

    rest_zones = []
    for i in range(N - 1):
        rest_zones.extend([frozenset(S.Y[i]), frozenset()])
    rules: list[SRule] = []
    names: dict = {}
    for r in S.rules:
        fin = [idle(renamings[i][checkers[i].finish]) for i in range(N - 1)]
        arm = [idle(renamings[i][checkers[i].start]) for i in range(N - 1)]
        pre = [idle(tags[(r.name, "pre", i)]) for i in range(N)]
        post = [idle(tags[(r.name, "post", i)]) for i in range(N)]
        names[(r.name, "enter")] = _fresh(f"{r.name}/enter", used)
        rules.append(build(names[(r.name, "enter")], [idle(s.state) for s in r.U], pre, fin, arm, rest_zones))
        # fire: v-parts left of q_{i+1} sit left of checker i's letter
        fU = [Side(EMPTY, pre[i].state, r.U[i].right) for i in range(N)]
        fV = [Side(EMPTY, post[i].state, r.V[i].right) for i in range(N)]
        cU = [Side(r.U[i + 1].left, fin[i].state, EMPTY) for i in range(N - 1)]
        cV = [Side(r.V[i + 1].left, arm[i].state, EMPTY) for i in range(N - 1)]
        fire_zones = []
        for i in range(N - 1):
            fire_zones.extend([frozenset(r.commuting[i]), frozenset()])
        names[(r.name, "fire")] = _fresh(f"{r.name}/fire", used)
        rules.append(build(names[(r.name, "fire")], fU, fV, cU, cV, fire_zones))
        for phase, s_states in (("pre", pre), ("post", post)):
            for j in range(N - 1):
                Z = checkers[j].machine
                for zr in Z.rules:
                    sU = [idle(s.state) for s in s_states]
                    sV = [idle(s.state) for s in s_states]
                    sU[j] = Side(EMPTY, s_states[j].state, rn(j, zr.U[0].right))
                    sV[j] = Side(EMPTY, s_states[j].state, rn(j, zr.V[0].right))
                    sU[j + 1] = Side(rn(j, zr.U[2].left), s_states[j + 1].state, EMPTY)
                    sV[j + 1] = Side(rn(j, zr.V[2].left), s_states[j + 1].state, EMPTY)
                    cs_U = [fin[k] if k < j else arm[k] for k in range(N - 1)]
                    cs_V = list(cs_U)
                    cs_U[j] = Side(rn(j, zr.U[1].left), renamings[j][zr.U[1].state], rn(j, zr.U[1].right))
                    cs_V[j] = Side(rn(j, zr.V[1].left), renamings[j][zr.V[1].state], rn(j, zr.V[1].right))
                    zc = []
                    for k in range(N - 1):
                        if k == j:
                            zc.extend([
                                frozenset(renamings[j][a] for a in zr.commuting[0]),
                                frozenset(renamings[j][a] for a in zr.commuting[1]),
                            ])
                        else:
                            zc.extend([Y[2 * k], Y[2 * k + 1]])
                    name = _fresh(f"{renamings[j]['rule:' + zr.name]}/{r.name}/{phase}", used)
                    names[(r.name, phase, j, zr.name)] = name
                    rules.append(build(name, sU, sV, cs_U, cs_V, zc))
        names[(r.name, "exit")] = _fresh(f"{r.name}/exit", used)
        rules.append(build(names[(r.name, "exit")], post, [idle(s.state) for s in r.V], fin, fin, rest_zones))

    composite = SMachine(tuple(Q), tuple(Y), tuple(rules), None, name=f"{S.name}oZ")
    out = ComposedMachine(composite, S, tuple(checkers), tuple(renamings), names)
    if S.accept is not None:
        composite = SMachine(composite.Q, composite.Y, composite.rules, out.lift(S.accept), composite.name)
        out = ComposedMachine(composite, S, tuple(checkers), tuple(renamings), names)
    return out
