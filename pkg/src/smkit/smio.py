"""Text formats for S-machines (``.sm``) and Turing machines (``.tm``).

Both are line based with ``#`` comments::

    parts: 3
    Q1: L
    Q2: p1 p2 p3
    Q3: R
    Y1: a0 a1
    Y2: a0
    accept: L p3 R
    rule r13: [L -> L ; p1 -> p3 ; R -> R] Y1= Y2=*

``Yi=*`` is the whole tape alphabet, ``Yi=`` the empty set, otherwise a
comma separated letter list.  A missing ``Yi=`` means ``*``.  An optional
``start:`` line lists start states (used by recognizers) and ``name:``
names the machine.  ``.tm`` files use ``cmd`` lines without the ``Yi``
part, need ``start:`` and may set ``input:`` (the input section, default 1).
"""

from __future__ import annotations

import re
from pathlib import Path

from .grouplab import Recognizer
from .presentations import GrpParseError, _strip_comment
from .smachine import SMachine, SRule, Side, ValidationError, validate
from .turing import TMachine, TMCommand, validate_tm
from .words import AlphabetError, Word, parse_word

__all__ = [
    "MachineParseError",
    "dump_sm",
    "dump_tm",
    "load_recognizer",
    "load_sm",
    "load_tm",
    "parse_sm",
    "parse_tm",
    "read_sm",
    "save_sm",
]


class MachineParseError(GrpParseError):
    pass


_RULE = re.compile(r"^(rule|cmd)\s+(\S+?)\s*:\s*\[(.*)\]\s*(.*)$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if line:
            yield no, line


def _side(text: str, part: int, Q: frozenset[str], no: int) -> Side:
    w = parse_word(text)
    idx = [k for k, (n, _) in enumerate(w) if n in Q]
    if len(idx) != 1:
        raise MachineParseError(f"line {no}: part {part} side {text!r} needs exactly one letter of Q{part}")
    k = idx[0]
    if w[k][1] != 1:
        raise MachineParseError(f"line {no}: state letter {w[k][0]} is inverted")
    return Side(Word(w[:k]), w[k][0], Word(w[k + 1 :]))


def _components(body: str, Q: tuple[frozenset[str], ...], no: int) -> tuple[tuple[Side, ...], tuple[Side, ...]]:
    comps = [c.strip() for c in body.split(";")]
    if len(comps) != len(Q):
        raise MachineParseError(f"line {no}: {len(comps)} components for {len(Q)} parts")
    U, V = [], []
    for i, comp in enumerate(comps):
        if comp.count("->") != 1:
            raise MachineParseError(f"line {no}: component {comp!r} needs one '->'")
        lhs, rhs = comp.split("->")
        U.append(_side(lhs, i + 1, Q[i], no))
        V.append(_side(rhs, i + 1, Q[i], no))
    return tuple(U), tuple(V)


class _Header:
    def __init__(self) -> None:
        self.parts: int | None = None
        self.Q: dict[int, frozenset[str]] = {}
        self.Y: dict[int, frozenset[str]] = {}
        self.accept: str | None = None
        self.start: tuple[str, ...] | None = None
        self.name: str | None = None
        self.input = 1
        self.rules: list[tuple[int, str, str, str, str]] = []

    def feed(self, no: int, line: str) -> None:
        m = _RULE.match(line)
        if m:
            self.rules.append((no, m.group(1), m.group(2), m.group(3), m.group(4)))
            return
        if ":" not in line:
            raise MachineParseError(f"line {no}: cannot parse {line!r}")
        key, val = (s.strip() for s in line.split(":", 1))
        if key == "parts":
            try:
                self.parts = int(val)
            except ValueError:
                raise MachineParseError(f"line {no}: parts must be an integer") from None
        elif re.fullmatch(r"Q\d+", key):
            self.Q[int(key[1:])] = frozenset(val.split())
        elif re.fullmatch(r"Y\d+", key):
            self.Y[int(key[1:])] = frozenset(val.split())
        elif key == "accept":
            self.accept = val
        elif key == "start":
            self.start = tuple(val.split())
        elif key == "name":
            self.name = val
        elif key == "input":
            self.input = int(val)
        else:
            raise MachineParseError(f"line {no}: unknown key {key!r}")

    def tables(self) -> tuple[tuple[frozenset[str], ...], tuple[frozenset[str], ...]]:
        if self.parts is None:
            raise MachineParseError("missing 'parts:' line")
        n = self.parts
        if sorted(self.Q) != list(range(1, n + 1)):
            raise MachineParseError(f"need Q1..Q{n}, got {sorted(self.Q)}")
        Q = tuple(self.Q[i] for i in range(1, n + 1))
        Y = tuple(self.Y.get(i, frozenset()) for i in range(1, n))
        return Q, Y


def _commuting(spec: str, Y: tuple[frozenset[str], ...], no: int) -> tuple[frozenset[str], ...]:
    out = list(Y)
    for tok in spec.split():
        m = re.fullmatch(r"Y(\d+)=(.*)", tok)
        if not m or not 1 <= int(m.group(1)) <= len(Y):
            raise MachineParseError(f"line {no}: bad alphabet spec {tok!r}")
        i = int(m.group(1)) - 1
        val = m.group(2)
        out[i] = Y[i] if val == "*" else frozenset(x for x in val.split(",") if x)
    return tuple(out)


def parse_sm(text: str) -> SMachine:
    return read_sm(text)[0]


def read_sm(text: str) -> tuple[SMachine, tuple[str, ...] | None]:
    """The machine together with the states of its ``start:`` line."""
    h = _Header()
    try:
        for no, line in _lines(text):
            h.feed(no, line)
        Q, Y = h.tables()
        rules = []
        for no, kind, name, body, rest in h.rules:
            if kind != "rule":
                raise MachineParseError(f"line {no}: 'cmd' lines belong in .tm files")
            U, V = _components(body, Q, no)
            rules.append(SRule(name, U, V, _commuting(rest, Y, no)))
        S = SMachine(Q, Y, tuple(rules), None, h.name or "S")
        if h.accept is not None:
            S = SMachine(Q, Y, S.rules, S.configuration(h.accept), S.name)
    except (AlphabetError, ValueError) as exc:
        if isinstance(exc, MachineParseError):
            raise
        raise MachineParseError(str(exc)) from exc
    bad = validate(S)
    if bad:
        raise ValidationError(bad)
    return S, h.start


def _alpha(letters) -> str:
    return " ".join(sorted(letters))


def dump_sm(S: SMachine, start: tuple[str, ...] | None = None) -> str:
    lines = [f"name: {S.name}", f"parts: {S.N}"]
    lines += [f"Q{i + 1}: {_alpha(q)}" for i, q in enumerate(S.Q)]
    lines += [f"Y{i + 1}: {_alpha(y)}" for i, y in enumerate(S.Y)]
    if S.accept is not None:
        lines.append(f"accept: {S.accept.word}")
    if start:
        lines.append("start: " + " ".join(start))
    for r in S.rules:
        comps = " ; ".join(f"{u} -> {v}" for u, v in zip(r.U, r.V))
        ys = " ".join(f"Y{i + 1}=" + ("*" if c == S.Y[i] else ",".join(sorted(c))) for i, c in enumerate(r.commuting))
        lines.append(f"rule {r.name}: [{comps}] {ys}".rstrip())
    return "\n".join(lines) + "\n"


def load_sm(path: str | Path) -> SMachine:
    return parse_sm(Path(path).read_text())


def load_recognizer(path: str | Path) -> Recognizer:
    S, start = read_sm(Path(path).read_text())
    if start is None:
        raise MachineParseError(f"{path}: a recognizer needs a 'start:' line")
    return Recognizer(S, start)


def save_sm(S: SMachine, path: str | Path, start: tuple[str, ...] | None = None) -> None:
    Path(path).write_text(dump_sm(S, start))


def parse_tm(text: str) -> TMachine:
    h = _Header()
    try:
        for no, line in _lines(text):
            h.feed(no, line)
        Q, Y = h.tables()
        cmds = []
        for no, kind, name, body, rest in h.rules:
            if kind != "cmd" or rest:
                raise MachineParseError(f"line {no}: .tm files take plain 'cmd' lines")
            U, V = _components(body, Q, no)
            cmds.append(TMCommand(name, U, V))
        if h.start is None:
            raise MachineParseError("missing 'start:' line")
        probe = SMachine(Q, Y, ())
        acc = probe.configuration(h.accept) if h.accept is not None else None
        if acc is None:
            raise MachineParseError("missing 'accept:' line")
        T = TMachine(Q, Y, tuple(cmds), h.start, acc, h.input, h.name or "T")
    except (AlphabetError, ValueError) as exc:
        if isinstance(exc, MachineParseError):
            raise
        raise MachineParseError(str(exc)) from exc
    bad = validate_tm(T)
    if bad:
        raise ValidationError(bad)
    return T


def dump_tm(T: TMachine) -> str:
    lines = [f"name: {T.name}", f"parts: {T.N}"]
    lines += [f"Q{i + 1}: {_alpha(q)}" for i, q in enumerate(T.Q)]
    lines += [f"Y{i + 1}: {_alpha(y)}" for i, y in enumerate(T.Y)]
    lines.append("start: " + " ".join(T.start))
    lines.append(f"accept: {T.accept.word}")
    if T.input_section != 1:
        lines.append(f"input: {T.input_section}")
    for c in T.commands:
        lines.append(f"cmd {c}")
    return "\n".join(lines) + "\n"


def load_tm(path: str | Path) -> TMachine:
    return parse_tm(Path(path).read_text())

