"""Finite presentations, bounded area queries and witness replay.

Two independent area routes are provided.  :func:`area_insertion` searches
over the move "insert a relator somewhere and freely reduce";
:func:`area_conjugates` enumerates products of conjugates ``c r c^-1``.  They
agree on every query where both return a value, and the test-suite holds
them to that.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .words import (
    EMPTY,
    Alphabet,
    AlphabetError,
    CyclicWord,
    Word,
    concat,
    cyclic_reduce,
    cyclic_shifts,
    invert,
    join,
    parse_word,
    reduce,
)

__all__ = [
    "AreaResult",
    "Budget",
    "DegenerateRelatorError",
    "GrpParseError",
    "Presentation",
    "Triviality",
    "area_conjugates",
    "area_insertion",
    "conjugacy_witness",
    "dump_grp",
    "factor_word",
    "factors_from_witness",
    "insert",
    "is_trivial",
    "load_grp",
    "parse_grp",
    "reduced_words",
    "replay",
    "symmetrize",
]


class DegenerateRelatorError(ValueError):
    pass


def _word_key(w: Word) -> tuple:
    return (len(w), tuple(w))


@dataclass(frozen=True, eq=False)
class Presentation:
    """Generators plus a symmetrized relator set.

    ``relators`` lists every cyclic shift of every relator and of its inverse
    as a linear word, in a fixed order (length, then letters).  ``defining``
    keeps the cyclically reduced relators as the caller supplied them; it is
    what gets written to ``.grp`` files.
    """

    generators: Alphabet
    relators: tuple[Word, ...]
    defining: tuple[Word, ...] = ()
    _set: frozenset = field(default=frozenset(), repr=False)

    @property
    def relator_set(self) -> frozenset[Word]:
        return self._set

    @property
    def cyclic_relators(self) -> frozenset[CyclicWord]:
        return frozenset(CyclicWord(r) for r in self.relators)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Presentation):
            return self.generators == other.generators and self._set == other._set
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.generators, self._set))

    def is_relator(self, w: Word) -> bool:
        return w in self._set

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def with_relators(self, extra: Iterable[Word], generators: Iterable[str] = ()) -> "Presentation":
        gens = self.generators.union(Alphabet(generators)) if generators else self.generators
        return symmetrize(gens, list(self.defining) + list(extra))

    def __repr__(self) -> str:
        return f"<Presentation {len(self.generators)} generators, {len(self.relators)} relators>"


def symmetrize(gens: Alphabet | Iterable[str], raw_relators: Iterable[Word]) -> Presentation:
    if not isinstance(gens, Alphabet):
        gens = Alphabet(gens)
    defining: list[Word] = []
    seen: set[CyclicWord] = set()
    closure: set[Word] = set()
    for raw in raw_relators:
        r = reduce(raw, gens)
        core, _ = cyclic_reduce(r)
        if not core.representative:
            raise DegenerateRelatorError(f"relator {raw} is trivial in the free group")
        if core in seen:
            continue
        seen.add(core)
        defining.append(core.representative)
        for base in (core.representative, invert(core.representative)):
            closure.update(cyclic_shifts(base))
    ordered = tuple(sorted(closure, key=_word_key))
    return Presentation(gens, ordered, tuple(defining), frozenset(closure))


# ---------------------------------------------------------------- area search


@dataclass(frozen=True)
class Budget:
    max_area: int = 6
    max_len: int = 24
    max_conj_len: int = 2


@dataclass(frozen=True)
class AreaResult:
    value: int | None
    witness: tuple[tuple[int, Word], ...] | None = None
    factors: tuple[tuple[Word, Word], ...] | None = None

    @property
    def known(self) -> bool:
        return self.value is not None

    def __str__(self) -> str:
        return "unknown" if self.value is None else str(self.value)


def insert(w: Word, position: int, relator: Word) -> Word:
    return concat(concat(Word(w[:position]), relator), Word(w[position:]))


def replay(w: Word, witness: Sequence[tuple[int, Word]], P: Presentation | None = None) -> Word:
    """Apply the insertions in order and return the final reduced word.

    With ``P`` given every inserted word must be one of its relators.
    """
    cur = w
    for k, (pos, r) in enumerate(witness):
        if P is not None and not P.is_relator(r):
            raise ValueError(f"insertion {k}: {r} is not a relator")
        if not 0 <= pos <= len(cur):
            raise ValueError(f"insertion {k}: position {pos} outside word of length {len(cur)}")
        cur = insert(cur, pos, r)
    return cur


def area_insertion(w: Word, P: Presentation, max_area: int, max_len: int) -> AreaResult:
    """Least number of relator insertions taking ``w`` to the empty word.

    Iterative deepening on the insertion count.  Only insertions whose last
    letter cancels the letter right after the insertion point are tried: a
    minimal diagram always has a cell with an edge on its boundary, and
    peeling that cell is exactly such an insertion, so nothing is lost.
    """
    P.generators.check(w)
    if not w:
        return AreaResult(0, ())
    if len(w) > max_len:
        return AreaResult(None)
    by_last: dict[tuple[str, int], list[Word]] = {}
    for r in P.relators:
        by_last.setdefault(r[-1], []).append(r)
    lmax = P.max_relator_length
    if lmax == 0:
        return AreaResult(None)

    failed: dict[Word, int] = {}

    def dfs(cur: Word, left: int, path: list[tuple[int, Word]]) -> bool:
        if not cur:
            return True
        # no length-based pruning: after a relator cancels, its neighbours may
        # cancel too, so one insertion can shorten the word by more than |r|
        if left == 0:
            return False
        if failed.get(cur, -1) >= left:
            return False
        for pos in range(len(cur)):
            name, sign = cur[pos]
            for r in by_last.get((name, -sign), ()):
                nxt = insert(cur, pos, r)
                if len(nxt) > max_len:
                    continue
                path.append((pos, r))
                if dfs(nxt, left - 1, path):
                    return True
                path.pop()
        failed[cur] = max(failed.get(cur, -1), left)
        return False

    for k in range(1, max_area + 1):
        path: list[tuple[int, Word]] = []
        if dfs(w, k, path):
            return AreaResult(k, tuple(path))
    return AreaResult(None)


def reduced_words(gens: Iterable[str], max_len: int) -> Iterable[Word]:
    """All freely reduced words of length <= max_len, shortest first."""
    letters = [(g, s) for g in sorted(gens) for s in (1, -1)]
    layer = [EMPTY]
    yield EMPTY
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for name, sign in letters:
                if w and w[-1][0] == name and w[-1][1] == -sign:
                    continue
                nw = Word(tuple(w) + ((name, sign),))
                nxt.append(nw)
                yield nw
        layer = nxt


def _abelian(w: Word) -> tuple:
    counts: dict[str, int] = {}
    for name, sign in w:
        counts[name] = counts.get(name, 0) + sign
    return tuple(sorted((k, v) for k, v in counts.items() if v))


def area_conjugates(w: Word, P: Presentation, max_m: int, max_conj_len: int) -> AreaResult:
    """Brute force: least ``m`` with ``w`` a product of ``m`` conjugates.

    Conjugators range over all reduced words of length ``<= max_conj_len``.
    Products of two factors are tabulated once; larger ``m`` are decided by
    meeting in the middle against that table.
    """
    P.generators.check(w)
    if not w:
        return AreaResult(0, factors=())
    conj: dict[Word, tuple[Word, Word]] = {}
    for c in reduced_words(P.generators, max_conj_len):
        for r in P.relators:
            x = join(c, r, invert(c))
            if x not in conj:
                conj[x] = (c, r)
    # exponent-sum vectors give a cheap necessary condition per m
    abel = {_abelian(r) for r in P.relators}
    target = _abelian(w)

    def abel_possible(m: int) -> bool:
        sums = {()}
        for _ in range(m):
            sums = {_add(s, a) for s in sums for a in abel}
        return target in sums

    pairs: dict[Word, tuple] | None = None

    def pair_table() -> dict[Word, tuple]:
        nonlocal pairs
        if pairs is None:
            pairs = {}
            for x, fx in conj.items():
                for y, fy in conj.items():
                    p = concat(x, y)
                    if p not in pairs:
                        pairs[p] = (fx, fy)
        return pairs

    for m in range(1, max_m + 1):
        if not abel_possible(m):
            continue
        if m == 1:
            if w in conj:
                return AreaResult(1, factors=(conj[w],))
        elif m == 2:
            hit = pair_table().get(w)
            if hit is not None:
                return AreaResult(2, factors=hit)
        else:
            found = _meet(w, m, conj, pair_table())
            if found is not None:
                return AreaResult(m, factors=found)
    return AreaResult(None)


def _add(a: tuple, b: tuple) -> tuple:
    d = dict(a)
    for k, v in b:
        d[k] = d.get(k, 0) + v
    return tuple(sorted((k, v) for k, v in d.items() if v))


def _meet(w: Word, m: int, conj: dict, pairs: dict) -> tuple | None:
    # w = x * rest, x a product of m-2 factors, rest a product of two
    for left in _products(m - 2, conj):
        x = join(*(factor_word(f) for f in left))
        rest = concat(invert(x), w)
        hit = pairs.get(rest)
        if hit is not None:
            return tuple(left) + tuple(hit)
    return None


def _products(k: int, conj: dict) -> Iterable[tuple]:
    if k == 1:
        for f in conj.values():
            yield (f,)
        return
    for f in conj.values():
        for rest in _products(k - 1, conj):
            yield (f,) + rest


def factors_from_witness(w: Word, witness: Sequence[tuple[int, Word]]) -> list[tuple[Word, Word]]:
    """Turn an insertion sequence for ``w`` into ``(conjugator, relator)`` factors.

    Inserting ``r`` at position ``p`` of ``u`` multiplies ``u`` on the left
    by ``u[:p] r u[:p]^-1``, so ``w`` is the product of the inverted
    conjugates in insertion order.
    """
    out = []
    cur = w
    for pos, r in witness:
        prefix = Word(cur[:pos])
        out.append((prefix, invert(r)))
        cur = insert(cur, pos, r)
    return out


def factor_word(f: tuple[Word, Word]) -> Word:
    c, r = f
    return join(c, r, invert(c))


class Triviality(str, enum.Enum):
    YES = "yes"
    NO_WITHIN_BUDGET = "no_within_budget"


def is_trivial(w: Word, P: Presentation, budget: Budget = Budget()) -> Triviality:
    res = area_insertion(w, P, budget.max_area, budget.max_len)
    return Triviality.YES if res.known else Triviality.NO_WITHIN_BUDGET


def conjugacy_witness(u: Word, v: Word, P: Presentation, budget: Budget = Budget()) -> Word | None:
    """First ``c`` (shortest, then lexicographic) with ``c^-1 u c = v`` shown in ``P``."""
    for c in reduced_words(P.generators, budget.max_conj_len):
        q = join(invert(c), u, c, invert(v))
        if is_trivial(q, P, budget) is Triviality.YES:
            return c
    return None


# ------------------------------------------------------------------ .grp files


class GrpParseError(ValueError):
    pass


def _strip_comment(line: str) -> str:
    # '#' only opens a comment at line start or after whitespace, since
    # brother letters such as ``r1#2`` contain it
    for i, ch in enumerate(line):
        if ch == "#" and (i == 0 or line[i - 1].isspace()):
            return line[:i]
    return line


def parse_grp(text: str) -> Presentation:
    gens: list[str] = []
    rels: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise GrpParseError(f"line {lineno}: expected 'gens:' or 'rels:'")
        key = key.strip()
        try:
            if key == "gens":
                gens.extend(rest.split())
            elif key == "rels":
                rels.extend(parse_word(chunk) for chunk in rest.split(";") if chunk.strip())
            else:
                raise GrpParseError(f"line {lineno}: unknown key {key!r}")
        except AlphabetError as exc:
            raise GrpParseError(f"line {lineno}: {exc}") from exc
    try:
        return symmetrize(Alphabet(gens), rels)
    except (AlphabetError, DegenerateRelatorError) as exc:
        raise GrpParseError(str(exc)) from exc


def load_grp(path: str | Path) -> Presentation:
    return parse_grp(Path(path).read_text())


def dump_grp(P: Presentation, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.append("gens: " + " ".join(P.generators))
    for r in P.defining:
        lines.append(f"rels: {r}")
    return "\n".join(lines) + "\n"
