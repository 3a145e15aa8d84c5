"""Time/space sampling and the equivalence-of-functions fitter.

Two increasing functions are equivalent when for some ``C``

    (1/C) g(n/C) - C n  <=  f(n)  <=  C g(C n) + C n

for all ``n``.  Here this is only checked on a finite sample.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .smachine import Bounds, Configuration, SMachine, Target, explore

__all__ = [
    "Candidate",
    "EquivalenceFit",
    "GrowthSample",
    "bench",
    "candidate",
    "fit_equivalence",
    "log_grid",
    "read_csv",
    "sample_function",
    "samples_from_rows",
    "write_csv",
]

CSV_COLUMNS = ("n", "steps", "space", "accepted")


@dataclass(frozen=True)
class GrowthSample:
    n: int
    value: int | None
    space: int | None = None
    accepted: bool = True

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("sample size must be non-negative")
        if self.value is not None and self.value < 0:
            raise ValueError("sample value must be non-negative")


def _size(c: Configuration) -> int:
    return sum(len(t) for t in c.tapes)


def bench(
    S: SMachine,
    inputs: Sequence[Configuration],
    bounds: Bounds = Bounds(),
    target: Target | None = None,
) -> list[GrowthSample]:
    """Minimal accepting step count and space for each input, in input order.

    ``n`` is the number of tape letters of the input.  Without ``target``
    the machine's accept configuration is used.
    """
    if target is None:
        if S.accept is None:
            raise ValueError(f"machine {S.name} has no accept configuration; pass a target")
        target = S.accept
    out = []
    for c in inputs:
        res = explore(S, c, target, bounds)
        if res.found:
            comp = res.computation
            out.append(GrowthSample(_size(c), comp.time, comp.space, True))
        else:
            out.append(GrowthSample(_size(c), None, None, False))
    return out


def write_csv(samples: Iterable[GrowthSample], path: str | Path | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in samples:
        w.writerow([s.n, "" if s.value is None else s.value, "" if s.space is None else s.space, int(s.accepted)])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_csv(path: str | Path) -> list[GrowthSample]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and set(CSV_COLUMNS) - set(rows[0]):
        raise ValueError(f"{path}: expected columns {','.join(CSV_COLUMNS)}")
    out = []
    for r in rows:
        out.append(
            GrowthSample(
                int(r["n"]),
                int(r["steps"]) if r["steps"] else None,
                int(r["space"]) if r["space"] else None,
                r["accepted"].strip() in ("1", "true", "True"),
            )
        )
    return out


def samples_from_rows(rows: Iterable[GrowthSample], column: str = "steps") -> list[GrowthSample]:
    """Worst accepted value per ``n``, sorted by ``n`` (the time-function view)."""
    best: dict[int, int] = {}
    for r in rows:
        if not r.accepted:
            continue
        v = r.value if column == "steps" else r.space
        if v is None:
            continue
        best[r.n] = max(best.get(r.n, 0), v)
    return [GrowthSample(n, best[n]) for n in sorted(best) if n >= 1]


# ---------------------------------------------------------------- candidates


@dataclass(frozen=True)
class Candidate:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, n):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return self.fn(np.asarray(n, dtype=float))


_POWER = re.compile(
    r"^(?:(?P<c>\d+(?:\.\d+)?)\s*\*?\s*)?n(?:\s*\^\s*(?P<e>\d+(?:\.\d+)?(?:/\d+)?))?(?P<log>\s*\*?\s*log2?\s*\(?n\)?)?$"
)


def _log2(x: np.ndarray) -> np.ndarray:
    return np.where(x > 1, np.log2(np.maximum(x, 1)), 0.0)


def candidate(expr: str) -> Candidate:
    """Parse ``n``, ``n^2``, ``n^3.2``, ``n^16/5``, ``n^2 log n``, ``5 n^3`` or ``2^n``.

    Logarithms are base 2 and taken as 0 below ``n = 2``.
    """
    text = " ".join(expr.strip().split())
    if text.replace(" ", "") == "2^n":
        return Candidate("2^n", lambda n: np.exp2(n))
    m = _POWER.match(text)
    if not m:
        raise ValueError(f"unknown candidate {expr!r}")
    coef = float(m.group("c") or 1)
    e = float(Fraction(m.group("e"))) if m.group("e") else 1.0
    if m.group("log"):
        return Candidate(text, lambda n: coef * np.power(n, e) * _log2(n))
    return Candidate(text, lambda n: coef * np.power(n, e))


# ---------------------------------------------------------------- fitting


@dataclass(frozen=True)
class EquivalenceFit:
    C: int | None
    candidate: str
    n_min: int
    n_max: int
    samples: int

    def __str__(self) -> str:
        c = "none" if self.C is None else str(self.C)
        return f"C = {c} for {self.candidate} (checked on {self.samples} samples, n in [{self.n_min}, {self.n_max}])"


def _holds(n: np.ndarray, f: np.ndarray, g: Candidate, C: int) -> bool:
    lower = g(np.floor(n / C)) / C - C * n
    upper = C * g(C * n) + C * n
    return bool(np.all(lower <= f) and np.all(f <= upper))


def fit_equivalence(samples: Sequence[GrowthSample], g: Candidate | str, C_max: int = 100) -> EquivalenceFit:
    """Smallest integer ``C <= C_max`` satisfying both inequalities at every sample."""
    if not samples:
        raise ValueError("no samples to fit")
    g = candidate(g) if isinstance(g, str) else g
    pts = sorted((s.n, s.value) for s in samples if s.value is not None)
    n = np.array([p[0] for p in pts], dtype=float)
    f = np.array([p[1] for p in pts], dtype=float)
    found = None
    for C in range(1, C_max + 1):
        if _holds(n, f, g, C):
            found = C
            break
    return EquivalenceFit(found, g.name, int(n[0]), int(n[-1]), len(pts))


def sample_function(fn: Callable[[float], float], ns: Iterable[int]) -> list[GrowthSample]:
    """Samples of a closed-form function, rounded to integers."""
    return [GrowthSample(n, int(round(fn(n)))) for n in ns]


def log_grid(n_max: int, dense: int = 1000, per_decade: int = 200) -> list[int]:
    """Every ``n`` up to ``dense`` then a geometric grid up to ``n_max`` (inclusive)."""
    ns = set(range(1, min(dense, n_max) + 1))
    if n_max > dense:
        k = int(math.ceil(per_decade * math.log10(n_max / dense)))
        ns.update(int(round(x)) for x in np.geomspace(dense, n_max, k + 1))
    return sorted(ns)
