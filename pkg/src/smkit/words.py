"""Signed letters, freely reduced words and cyclic words.

A word is stored as a tuple of ``(name, sign)`` pairs with ``sign`` in
``{+1, -1}``.  :class:`Word` subclasses ``tuple`` so words hash and compare
cheaply, which matters for the breadth-first searches elsewhere in the
package.  Words built through :func:`reduce` (or the helpers here) are always
freely reduced; the raw ``Word(...)`` constructor does not reduce and is meant
for already-reduced data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

__all__ = [
    "AlphabetError",
    "Alphabet",
    "CyclicWord",
    "Letter",
    "Word",
    "EMPTY",
    "concat",
    "cyclic_reduce",
    "cyclic_shifts",
    "invert",
    "join",
    "parse_word",
    "reduce",
    "word",
]

KINDS = ("tape", "state", "rule-label", "generic")
_FORBIDDEN = set("^; \t\n")


class AlphabetError(ValueError):
    """A letter is unknown to the alphabet, or two alphabets disagree."""


def _check_token(name: str) -> None:
    if not name or any(ch in _FORBIDDEN for ch in name) or name == "1":
        raise AlphabetError(f"invalid letter name {name!r}")


@dataclass(frozen=True, order=True)
class Letter:
    name: str
    kind: str = field(default="generic", compare=False)

    def __post_init__(self) -> None:
        _check_token(self.name)
        if self.kind not in KINDS:
            raise AlphabetError(f"unknown letter class {self.kind!r}")


class Alphabet(Mapping[str, Letter]):
    """An ordered-by-name set of letters."""

    def __init__(self, letters: Iterable[Letter | str] = (), kind: str = "generic"):
        table: dict[str, Letter] = {}
        for item in letters:
            letter = item if isinstance(item, Letter) else Letter(item, kind)
            old = table.get(letter.name)
            if old is not None and old.kind != letter.kind:
                raise AlphabetError(f"letter {letter.name!r} declared twice with different classes")
            table[letter.name] = letter
        self._letters = dict(sorted(table.items()))

    def __getitem__(self, name: str) -> Letter:
        return self._letters[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._letters)

    def __len__(self) -> int:
        return len(self._letters)

    def __repr__(self) -> str:
        return f"Alphabet({' '.join(self._letters)})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Alphabet):
            return self._letters == other._letters
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._letters))

    def names(self) -> frozenset[str]:
        return frozenset(self._letters)

    def union(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(list(self.values()) + list(other.values()))

    def check(self, w: Iterable[tuple[str, int]]) -> None:
        for name, _ in w:
            if name not in self._letters:
                raise AlphabetError(f"letter {name!r} is not in {self!r}")


class Word(tuple):
    """A freely reduced word: a tuple of ``(name, sign)`` pairs."""

    __slots__ = ()

    def __mul__(self, other):  # type: ignore[override]
        return concat(self, other)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return invert(self) ** (-k)
        out = EMPTY
        for _ in range(k):
            out = concat(out, self)
        return out

    def inverse(self) -> "Word":
        return invert(self)

    def letters(self) -> frozenset[str]:
        return frozenset(name for name, _ in self)

    def is_positive(self) -> bool:
        return all(sign > 0 for _, sign in self)

    def __str__(self) -> str:
        if not self:
            return "1"
        return " ".join(name if sign > 0 else f"{name}^-1" for name, sign in self)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


EMPTY = Word()


def reduce(raw: Iterable[tuple[str, int]], alphabet: Alphabet | None = None) -> Word:
    """Freely reduce a sequence of signed letters."""
    out: list[tuple[str, int]] = []
    for name, sign in raw:
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign!r}")
        if alphabet is not None and name not in alphabet:
            raise AlphabetError(f"letter {name!r} is not in {alphabet!r}")
        if out and out[-1][0] == name and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((name, sign))
    return Word(out)


def invert(w: Iterable[tuple[str, int]]) -> Word:
    return Word((name, -sign) for name, sign in reversed(tuple(w)))


def concat(u: Word, v: Word, alphabet: Alphabet | None = None) -> Word:
    """Product of two reduced words; cancellation only happens at the seam."""
    if alphabet is not None:
        alphabet.check(u)
        alphabet.check(v)
    i = 0
    n = min(len(u), len(v))
    while i < n and u[-1 - i][0] == v[i][0] and u[-1 - i][1] == -v[i][1]:
        i += 1
    if i == 0:
        return Word(tuple(u) + tuple(v))
    return Word(tuple(u[: len(u) - i]) + tuple(v[i:]))


def join(*parts: Word) -> Word:
    out = EMPTY
    for p in parts:
        out = concat(out, p)
    return out


def word(*tokens: str) -> Word:
    """``word("x", "y^-1")`` - shorthand used heavily in tests and presets."""
    return parse_word(" ".join(tokens))


def parse_word(text: str, alphabet: Alphabet | None = None) -> Word:
    """Parse ``"x y^-1 q"``; ``"1"`` (or blank) is the empty word."""
    raw = []
    for tok in text.split():
        if tok == "1":
            continue
        if tok.endswith("^-1"):
            name, sign = tok[:-3], -1
        elif tok.endswith("^1"):
            name, sign = tok[:-2], 1
        else:
            name, sign = tok, 1
        _check_token(name)
        raw.append((name, sign))
    return reduce(raw, alphabet)


def cyclic_shifts(w: Word) -> list[Word]:
    return [Word(w[i:] + w[:i]) for i in range(len(w))] or [EMPTY]


@dataclass(frozen=True)
class CyclicWord:
    """A cyclically reduced word considered up to rotation.

    Equality and hashing use the lexicographically least rotation, so the
    stored ``representative`` keeps whatever rotation the caller supplied.
    """

    representative: Word

    def __post_init__(self) -> None:
        w = self.representative
        if len(w) > 1 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
            raise ValueError(f"{w} is not cyclically reduced")

    @property
    def key(self) -> tuple:
        return min(tuple(s) for s in cyclic_shifts(self.representative))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CyclicWord):
            return len(self.representative) == len(other.representative) and self.key == other.key
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.key)

    def __len__(self) -> int:
        return len(self.representative)

    def shifts(self) -> list[Word]:
        return cyclic_shifts(self.representative)

    def inverse(self) -> "CyclicWord":
        return CyclicWord(invert(self.representative))

    def __str__(self) -> str:
        return str(self.representative)


def cyclic_reduce(w: Word) -> tuple[CyclicWord, Word]:
    """Return ``(core, c)`` with ``w == c * core * c^-1`` in the free group."""
    i = 0
    n = len(w)
    while 2 * i + 1 < n and w[i][0] == w[n - 1 - i][0] and w[i][1] == -w[n - 1 - i][1]:
        i += 1
    return CyclicWord(Word(w[i : n - i])), Word(w[:i])
