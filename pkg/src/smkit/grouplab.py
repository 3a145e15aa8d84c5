"""Groups built from machines: Miller machines, hubs and the easy Higman embedding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .presentations import Presentation, symmetrize
from .smachine import (
    Bounds,
    Computation,
    Configuration,
    SearchResult,
    SMachine,
    SRule,
    Side,
    ValidationError,
    a_relator,
    brother,
    explore,
    presentation_of,
    q_relator,
    validate,
)
from .words import EMPTY, Alphabet, Letter, Word, cyclic_reduce, invert, join, reduce

__all__ = [
    "HigmanBundle",
    "HubGroup",
    "MillerMachine",
    "Recognizer",
    "amalgam_certificate",
    "copy_configuration",
    "collapse_brothers",
    "even_recognizer",
    "higman_bundle",
    "hub_group",
    "k_configuration",
    "k_word",
    "lift_computation",
    "miller",
    "miller_conjugacy_witness",
    "parallel_copies",
    "recognize",
    "shift_machine",
]


def _fresh(name: str, used: set[str]) -> str:
    while name in used:
        name += "_"
    used.add(name)
    return name


def _letter(name: str, sign: int = 1) -> Word:
    return Word(((name, sign),))


# ---------------------------------------------------------------- Miller machine


@dataclass(frozen=True, eq=False)
class MillerMachine:
    base: Presentation
    machine: SMachine
    head: str
    # generator -> rule moving the head across it; rule -> inserted relator
    move_rule: dict[str, str]
    relator_rule: dict[str, Word]

    def start(self, w: Word) -> Configuration:
        L, R = self.machine.accept.states[0], self.machine.accept.states[2]
        return Configuration((L, self.head, R), (EMPTY, w))


def miller(P: Presentation) -> MillerMachine:
    """The Miller machine of ``P`` with endmarker parts ``L`` and ``R``.

    ``t.x`` is ``[L -> L, x q -> q x, R -> R]`` and ``t.r<i>`` is
    ``[L -> L, q -> q r_i, R -> R]`` for the i-th defining relator.
    """
    X = sorted(P.generators)
    used = set(X)
    L, q, R = _fresh("L", used), _fresh("q", used), _fresh("R", used)
    Y = frozenset(X)
    idle_L, idle_R = Side(EMPTY, L, EMPTY), Side(EMPTY, R, EMPTY)
    rules = []
    moves, inserts = {}, {}
    for x in X:
        name = _fresh(f"t.{x}", used)
        moves[x] = name
        rules.append(SRule(name, (idle_L, Side(_letter(x), q, EMPTY), idle_R), (idle_L, Side(EMPTY, q, _letter(x)), idle_R), (Y, Y)))
    for i, r in enumerate(P.defining, 1):
        name = _fresh(f"t.r{i}", used)
        inserts[name] = r
        rules.append(SRule(name, (idle_L, Side(EMPTY, q, EMPTY), idle_R), (idle_L, Side(EMPTY, q, r), idle_R), (Y, Y)))
    accept = Configuration((L, q, R), (EMPTY, EMPTY))
    S = SMachine((frozenset({L}), frozenset({q}), frozenset({R})), (Y, Y), tuple(rules), accept, name="M(G)")
    return MillerMachine(P, S, q, moves, inserts)


def miller_conjugacy_witness(M: MillerMachine | Presentation, w: Word, bounds: Bounds = Bounds()) -> Computation | None:
    """A computation ``L q w R ->* L q R``; its history conjugates ``q w`` to ``q``."""
    if isinstance(M, Presentation):
        M = miller(M)
    return explore(M.machine, M.start(w), M.machine.accept, bounds).computation


def collapse_brothers(S: SMachine, drop: Iterable[str] = (), invert_rules: bool = False) -> Presentation:
    """``presentation_of(S)`` with every brother renamed to its rule and ``drop`` deleted.

    Relators that become trivial are discarded.  ``invert_rules`` replaces
    each rule letter by its inverse, which switches between the two common
    conjugation conventions.
    """
    drop = set(drop)
    rule_of = {brother(r.name, i + 1): r.name for r in S.rules for i in range(S.N)}
    raw = []
    for r in S.rules:
        raw += [q_relator(r, i, S.N) for i in range(S.N)]
        for seg, ys in enumerate(r.commuting):
            raw += [a_relator(r, seg, a) for a in sorted(ys)]
    out = []
    for rel in raw:
        w = []
        for n, s in rel:
            if n in drop:
                continue
            if n in rule_of:
                w.append((rule_of[n], -s if invert_rules else s))
            else:
                w.append((n, s))
        w = reduce(w)
        if w:
            out.append(w)
    letters = [Letter(q, "state") for q in S.state_letters - drop]
    letters += [Letter(a, "tape") for a in S.tape_letters - drop]
    letters += [Letter(r.name, "rule-label") for r in S.rules]
    # cyclic reduction can still kill a relator, e.g. L t L^-1 t^-1 without L
    out = [w for w in out if len(cyclic_reduce(w)[0])]
    return symmetrize(Alphabet(letters), out)


def shift_machine(rules: int = 2) -> SMachine:
    """``[k -> k a, E -> E]`` repeated; collapsed it is ``<t_i, a, k | a^t = a, k^t = k a>``."""
    Y = frozenset({"a"})
    rs = [
        SRule(f"t{i}", (Side(EMPTY, "k", EMPTY), Side(EMPTY, "E", EMPTY)), (Side(EMPTY, "k", _letter("a")), Side(EMPTY, "E", EMPTY)), (Y,))
        for i in range(1, rules + 1)
    ]
    return SMachine((frozenset({"k"}), frozenset({"E"})), (Y,), tuple(rs), Configuration(("k", "E"), (EMPTY,)), name="shift")


# ---------------------------------------------------------------- parallel copies


def _prime(name: str, j: int) -> str:
    return name + "'" * j


def parallel_copies(S: SMachine, k: int, separator: str | None = None) -> SMachine:
    """``k`` renamed copies of ``S`` driven by the same rules.

    Copy ``j`` (0-based) appends ``j`` primes to every letter.  With a
    ``separator`` prefix, single-letter parts ``<sep>1 .. <sep>{k+1}``
    bracket the copies.  Tape segments between copies are empty.
    """
    if k < 1:
        raise ValueError("need at least one copy")
    sep = [f"{separator}{j + 1}" for j in range(k + 1)] if separator else []
    clash = set(sep) & {_prime(a, j) for a in S.state_letters | S.tape_letters for j in range(k)}
    if clash:
        raise ValueError(f"separator letters collide with machine letters: {sorted(clash)}")
    none = frozenset()
    Q: list[frozenset[str]] = []
    Y: list[frozenset[str]] = []

    def ren(w: Word, j: int) -> Word:
        return Word((_prime(n, j), s) for n, s in w)

    def side(sd: Side, j: int) -> Side:
        return Side(ren(sd.left, j), _prime(sd.state, j), ren(sd.right, j))

    for j in range(k):
        if sep:
            Q.append(frozenset({sep[j]}))
            Y.append(none)
        for i, q in enumerate(S.Q):
            Q.append(frozenset(_prime(a, j) for a in q))
            if i < S.N - 1:
                Y.append(frozenset(_prime(a, j) for a in S.Y[i]))
            elif j < k - 1 or sep:
                Y.append(none)
    if sep:
        Q.append(frozenset({sep[-1]}))

    rules = []
    for r in S.rules:
        U: list[Side] = []
        V: list[Side] = []
        C: list[frozenset[str]] = []
        for j in range(k):
            if sep:
                U.append(Side(EMPTY, sep[j], EMPTY))
                V.append(Side(EMPTY, sep[j], EMPTY))
                C.append(none)
            U += [side(s, j) for s in r.U]
            V += [side(s, j) for s in r.V]
            for i in range(S.N):
                if i < S.N - 1:
                    C.append(frozenset(_prime(a, j) for a in r.commuting[i]))
                elif j < k - 1 or sep:
                    C.append(none)
        if sep:
            U.append(Side(EMPTY, sep[-1], EMPTY))
            V.append(Side(EMPTY, sep[-1], EMPTY))
        rules.append(SRule(r.name, tuple(U), tuple(V), tuple(C)))

    accept = None
    if S.accept is not None:
        accept = copy_configuration(S.accept, k, sep)
    return SMachine(tuple(Q), tuple(Y), tuple(rules), accept, name=f"{S.name}^{k}")


def copy_configuration(c: Configuration, k: int, sep: Sequence[str] = ()) -> Configuration:
    """The configuration of ``k`` parallel copies all equal to ``c``."""
    states: list[str] = []
    tapes: list[Word] = []
    for j in range(k):
        if sep:
            states.append(sep[j])
            tapes.append(EMPTY)
        for i, q in enumerate(c.states):
            states.append(_prime(q, j))
            if i < len(c.tapes):
                tapes.append(Word((_prime(n, j), s) for n, s in c.tapes[i]))
            elif j < k - 1 or sep:
                tapes.append(EMPTY)
    if sep:
        states.append(sep[-1])
    return Configuration(tuple(states), tuple(tapes))


def lift_computation(comp: Computation, k: int, sep: Sequence[str] = ()) -> Computation:
    return Computation(
        copy_configuration(comp.start, k, sep),
        comp.history,
        tuple(copy_configuration(c, k, sep) for c in comp.trace),
    )


# ---------------------------------------------------------------- hub groups


MIN_COPIES = 9


@dataclass(frozen=True, eq=False)
class HubGroup:
    machine: SMachine
    hub: Word
    presentation: Presentation
    copies: int
    base: SMachine
    separator: str | None = None

    @property
    def separators(self) -> list[str]:
        return [f"{self.separator}{j + 1}" for j in range(self.copies + 1)] if self.separator else []


def hub_group(S: SMachine, k: int = MIN_COPIES, separator: str | None = None) -> HubGroup:
    if k < MIN_COPIES:
        raise ValueError(f"a hub group needs more than 8 copies, got {k}")
    if S.accept is None:
        raise ValueError(f"machine {S.name} has no accept configuration")
    copies = parallel_copies(S, k, separator)
    return _hub(copies, S, k, separator)


def _hub(copies: SMachine, base: SMachine, k: int, separator: str | None) -> HubGroup:
    P = presentation_of(copies)
    W = copies.accept.word
    hubbed = symmetrize(P.generators, list(P.defining) + [W])
    return HubGroup(copies, W, hubbed, k, base, separator)


# ---------------------------------------------------------------- Higman bundle


@dataclass(frozen=True, eq=False)
class Recognizer:
    """An S-machine reading ``q_1 w q_2 ... q_m`` with ``w`` in segment 1."""

    machine: SMachine
    start: tuple[str, ...]

    def encode(self, w: Word) -> Configuration:
        tapes = [EMPTY] * (self.machine.N - 1)
        tapes[0] = w
        return Configuration(self.start, tuple(tapes))


def even_recognizer(x: str = "x") -> Recognizer:
    """Recognizes words in ``x`` with even exponent sum.

    ``e = [q1 -> q1, x x q2 -> q2]`` strips two letters, ``f`` switches to
    the barred states and needs an empty tape.
    """
    X = frozenset({x})
    xx = Word(((x, 1), (x, 1)))
    e = SRule("e", (Side(EMPTY, "q1", EMPTY), Side(xx, "q2", EMPTY)), (Side(EMPTY, "q1", EMPTY), Side(EMPTY, "q2", EMPTY)), (X,))
    f = SRule("f", (Side(EMPTY, "q1", EMPTY), Side(EMPTY, "q2", EMPTY)), (Side(EMPTY, "q1b", EMPTY), Side(EMPTY, "q2b", EMPTY)), (frozenset(),))
    S = SMachine(
        (frozenset({"q1", "q1b"}), frozenset({"q2", "q2b"})),
        (X,),
        (e, f),
        Configuration(("q1b", "q2b"), (EMPTY,)),
        name="Even",
    )
    return Recognizer(S, ("q1", "q2"))


def recognize(R: Recognizer, w: Word, bounds: Bounds = Bounds()) -> SearchResult:
    return explore(R.machine, R.encode(w), R.machine.accept, bounds)


@dataclass(frozen=True, eq=False)
class HigmanBundle:
    recognizer: Recognizer
    X: frozenset[str]
    G: HubGroup
    Gprime: HubGroup
    # letters of G' carry this suffix inside the amalgam
    mark: str
    A: frozenset[str]
    amalgam: Presentation
    merged: Presentation
    embedding: dict[str, str] = field(default_factory=dict)

    def primed(self, w: Word) -> Word:
        return Word((n + self.mark, s) for n, s in w)


def k_word(B: HigmanBundle, w: Word, variant: str = "K") -> Word:
    """``K(w)`` puts ``w`` in the first copy too; ``K'(w)`` leaves it empty."""
    if variant not in ("K", "K'"):
        raise ValueError("variant must be 'K' or \"K'\"")
    if not w.letters() <= B.X:
        raise ValueError(f"{w} is not over {sorted(B.X)}")
    return k_configuration(B, w, variant).word


def k_configuration(B: HigmanBundle, w: Word, variant: str = "K") -> Configuration:
    start = B.recognizer.encode(w)
    c = copy_configuration(start, B.G.copies, B.G.separators)
    if variant == "K'":
        tapes = list(c.tapes)
        tapes[1] = EMPTY  # segment 1 of the first copy, after k1's empty junction
        c = Configuration(c.states, tuple(tapes))
    return c


def _idle_first_copy(copies: SMachine, base: SMachine, k: int, sep: Sequence[str]) -> SMachine:
    """Copies where the first copy keeps only its state letters."""
    offset = 1 if sep else 0
    n = base.N
    Y = list(copies.Y)
    for i in range(n - 1):
        Y[offset + i] = frozenset()
    rules = []
    for r in copies.rules:
        U, V, C = list(r.U), list(r.V), list(r.commuting)
        for i in range(n):
            p = offset + i
            U[p] = Side(EMPTY, U[p].state, EMPTY)
            V[p] = Side(EMPTY, V[p].state, EMPTY)
        for i in range(n - 1):
            C[offset + i] = frozenset()
        rules.append(SRule(r.name, tuple(U), tuple(V), tuple(C)))
    return SMachine(copies.Q, tuple(Y), tuple(rules), copies.accept, name=copies.name + "'")


def higman_bundle(R: Recognizer, X: Iterable[str], k: int = MIN_COPIES, separator: str = "k", mark: str = "*") -> HigmanBundle:
    X = frozenset(X)
    S = R.machine
    bad = validate(S)
    if bad:
        raise ValidationError(bad)
    if S.N < 2 or not X <= S.Y[0]:
        raise ValueError(f"input letters {sorted(X - (S.Y[0] if S.N > 1 else frozenset()))} are not in segment 1")
    if S.accept is None:
        raise ValueError("the recognizer has no accept configuration")
    for i, t in enumerate(S.accept.tapes):
        if t:
            raise ValueError(f"accept configuration has a non-empty tape in segment {i + 1}")
    G = hub_group(S, k, separator)
    copies2 = _idle_first_copy(G.machine, S, k, G.separators)
    Gp = _hub(copies2, S, k, separator)
    A = copies2.state_letters | copies2.tape_letters
    gens = list(G.presentation.generators.values())
    gens += [Letter(n + mark, l.kind) for n, l in Gp.presentation.generators.items()]
    idents = [join(_letter(a), _letter(a + mark, -1)) for a in sorted(A)]
    primed = [Word((n + mark, s) for n, s in r) for r in Gp.presentation.defining]
    amalgam = symmetrize(Alphabet(gens), list(G.presentation.defining) + primed + idents)
    # Tietze-merged form: the letters of A are shared outright
    merged_gens = list(G.presentation.generators.values())
    merged_gens += [Letter(n + mark, l.kind) for n, l in Gp.presentation.generators.items() if n not in A]
    merged_rels = [Word((n if n in A else n + mark, s) for n, s in r) for r in Gp.presentation.defining]
    merged = symmetrize(Alphabet(merged_gens), list(G.presentation.defining) + merged_rels)
    return HigmanBundle(R, X, G, Gp, mark, frozenset(A), amalgam, merged, {x: x for x in sorted(X)})


def amalgam_certificate(
    B: HigmanBundle,
    w: Word,
    k_factors: Sequence[tuple[Word, Word]],
    kp_factors: Sequence[tuple[Word, Word]],
) -> list[tuple[Word, Word]]:
    """Write ``w`` as a product of conjugates of amalgam relators.

    ``k_factors`` expresses ``K(w)`` over ``G`` and ``kp_factors`` expresses
    ``K'(w)`` over ``G'`` (unmarked letters), as ``(conjugator, relator)``
    pairs.  With ``c`` the first two letters of ``K(w)``,

        w = c^-1 K(w) c . c^-1 K'*^-1 c . c^-1 (K'* K'^-1) c

    where ``K'*`` is the marked copy of ``K'(w)``; the last factor
    telescopes into one identification relator per letter of ``K'(w)``.
    """
    Kw = k_word(B, w, "K")
    Kp = k_word(B, w, "K'")
    c = Word(Kw[:2])
    ci = invert(c)
    out: list[tuple[Word, Word]] = [(join(ci, g), r) for g, r in k_factors]
    for g, r in reversed(kp_factors):
        out.append((join(ci, B.primed(g)), invert(B.primed(r))))
    prefixes = [B.primed(Word(Kp[:i])) for i in range(len(Kp))]
    for i in range(len(Kp) - 1, -1, -1):
        n, s = Kp[i]
        # a*^s a^-s is a relator of the symmetrized identification a a*^-1
        out.append((join(ci, prefixes[i]), join(_letter(n + B.mark, s), _letter(n, -s))))
    return out
