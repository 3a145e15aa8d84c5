"""Trapezia and discs built from computations.

A trapezium stacks one theta-band per step.  Band cells are the
``(q, theta)`` relators, one per part, plus one ``(a, theta)`` commutation
cell per letter of the residues.  Besides the combinatorial data a diagram
can produce an explicit insertion witness for its boundary word: peeling
the bands one by one, each cell becomes exactly one relator insertion, so
replaying the witness certifies the area claim.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .presentations import Presentation, insert, replay
from .smachine import (
    Computation,
    Configuration,
    SMachine,
    a_relator,
    apply,
    brother,
    format_history,
    q_relator,
    residues,
)
from .words import EMPTY, CyclicWord, Word, concat, cyclic_reduce, invert, join

__all__ = [
    "Band",
    "Cell",
    "Disc",
    "Trapezium",
    "Verification",
    "disc",
    "export_dot",
    "free_history",
    "theta_band",
    "trapezium",
    "verify",
]


@dataclass(frozen=True)
class Cell:
    boundary: CyclicWord
    kind: str  # "q", "a" or "hub"
    # part index for q-cells, segment index for a-cells (0-based)
    where: int = 0
    letter: str | None = None


@dataclass(frozen=True)
class Band:
    rule: tuple[str, int]
    cells: tuple[Cell, ...]
    bottom: Configuration
    top: Configuration
    residues: tuple[Word, ...]

    @property
    def q_cells(self) -> list[Cell]:
        return [c for c in self.cells if c.kind == "q"]


def theta_band(S: SMachine, rule: tuple[str, int], c: Configuration) -> Band:
    zs = residues(S, rule, c)
    top = apply(S, rule, c)  # raises if not applicable
    assert zs is not None
    r = S.rule(rule[0])
    # left to right along the band: q-cell, the a-cells of the next segment, ...
    cells: list[Cell] = []
    for i in range(S.N):
        cells.append(Cell(CyclicWord(q_relator(r, i, S.N)), "q", i))
        if i < len(zs):
            cells += [Cell(CyclicWord(a_relator(r, i, name)), "a", i, name) for name, _ in zs[i]]
    return Band(rule, tuple(cells), c, top, zs)


def free_history(comp: Computation) -> Computation:
    """Drop adjacent ``theta theta^-1`` pairs (and the configurations between them)."""
    hist: list[tuple[str, int]] = []
    trace: list[Configuration] = [comp.start]
    for lab, c in zip(comp.history, comp.trace[1:]):
        if hist and hist[-1] == (lab[0], -lab[1]):
            hist.pop()
            trace.pop()
        else:
            hist.append(lab)
            trace.append(c)
    return Computation(comp.start, tuple(hist), tuple(trace))


@dataclass(frozen=True, eq=False)
class Trapezium:
    machine: SMachine
    computation: Computation
    bands: tuple[Band, ...]

    @property
    def area(self) -> int:
        return sum(len(b.cells) for b in self.bands)

    @property
    def side(self) -> Word:
        """History word over first brothers, read bottom to top."""
        return Word((brother(n, 1), s) for n, s in self.computation.history)

    @property
    def bottom(self) -> Word:
        return self.computation.start.word

    @property
    def top(self) -> Word:
        return self.computation.end.word

    @property
    def boundary(self) -> Word:
        """``h^-1 W_1 h W_n^-1`` - trivial in the machine's group."""
        h = self.side
        return join(invert(h), self.bottom, h, invert(self.top))

    @property
    def diameter_bound(self) -> int:
        return self.computation.time + self.computation.space

    def cell_ids(self) -> list[str]:
        return [f"c{b}_{i}" for b, band in enumerate(self.bands) for i in range(len(band.cells))]

    def witness(self) -> list[tuple[int, Word]]:
        word = self.boundary
        out: list[tuple[int, Word]] = []
        n = len(self.bands)
        for k, band in enumerate(self.bands):
            word = _peel(self.machine, band, word, n - k - 1, out, shift=False)
        return out

    def diameter(self, limit: int = 10_000) -> int | None:
        """Exact diameter of the cell adjacency graph, ``None`` above ``limit`` cells."""
        return _graph_diameter(self.cell_ids(), _edges(self), limit)

    def __str__(self) -> str:
        return f"trapezium: {len(self.bands)} bands, area {self.area}, history {format_history(self.computation.history)}"


def trapezium(S: SMachine, comp: Computation) -> Trapezium:
    comp.check(S)
    comp = free_history(comp)
    bands = tuple(theta_band(S, lab, comp.trace[k]) for k, lab in enumerate(comp.history))
    return Trapezium(S, comp, bands)


def _peel(S: SMachine, band: Band, word: Word, at: int, out: list, shift: bool) -> Word:
    """Replace ``b^-s W b^s`` (or ``W`` alone when ``shift``) by the band's top.

    ``at`` is the index of the band's first-brother letter, or with
    ``shift`` the index where the bottom configuration starts.  Every
    insertion is appended to ``out``.
    """
    name, s = band.rule
    r = S.rule(name)
    U, V = (r.U, r.V) if s == 1 else (r.V, r.U)
    N = S.N

    def b(i: int, sign: int) -> Word:
        # brother i (1-based, wrapping), sign already folded with s
        j = (i - 1) % N + 1
        return Word(((brother(name, j), sign * s),))

    def find(letter: tuple[str, int]) -> int:
        idx = [p for p, x in enumerate(word) if x == letter]
        if len(idx) != 1:
            raise ValueError(f"band {band.rule}: expected one {letter}, found {len(idx)}")
        return idx[0]

    def put(pos: int, rel: Word) -> None:
        nonlocal word
        out.append((pos, rel))
        word = insert(word, pos, rel)

    for i in range(1, N + 1):
        X = join(V[i - 1].word, b(i + 1, -1), invert(U[i - 1].word), b(i, 1))
        if i == 1:
            if shift:
                # b_1 V_1 b_2^-1 U_1^-1 opens the band without an existing b_1^-1
                put(at, join(b(1, 1), V[0].word, b(2, -1), invert(U[0].word)))
            else:
                put(at, X)
        else:
            put(find(b(i, -1)[0]), X)
        if i < N:
            bl = b(i + 1, -1)
            for letter in band.residues[i - 1]:
                a = Word((letter,))
                put(find(bl[0]), join(a, bl, invert(a), invert(bl)))
    return word


@dataclass(frozen=True, eq=False)
class Disc:
    trapezium: Trapezium
    hub: Word
    hub_cell: Cell
    # the two sides of the trapezium carry the same label and are glued
    folded: bool = True

    @property
    def area(self) -> int:
        return self.trapezium.area + 1

    @property
    def boundary(self) -> Word:
        return self.trapezium.bottom

    def witness(self) -> list[tuple[int, Word]]:
        T = self.trapezium
        word = T.bottom
        out: list[tuple[int, Word]] = []
        for k, band in enumerate(T.bands):
            word = _peel(T.machine, band, word, k, out, shift=True)
        pos = len(T.bands)
        out.append((pos, invert(self.hub)))
        return out

    def diameter(self, limit: int = 10_000) -> int | None:
        ids = self.trapezium.cell_ids() + ["hub"]
        return _graph_diameter(ids, _edges(self.trapezium) + _hub_edges(self.trapezium), limit)


def disc(hub_machine: SMachine, hub: Word, comp: Computation) -> Disc:
    """Fold the trapezium of ``comp`` (ending at the hub word) and add the hub cell."""
    T = trapezium(hub_machine, comp)
    if T.top != hub:
        raise ValueError(f"computation ends at {T.top}, not at the hub word")
    core, _ = cyclic_reduce(hub)
    return Disc(T, hub, Cell(core, "hub"))


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class Verification:
    ok: bool
    problems: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(self.problems)


def _same_cell(rel: Word, cell: Cell) -> bool:
    c = CyclicWord(cyclic_reduce(rel)[0].representative)
    return c == cell.boundary or c == cell.boundary.inverse()


def verify(D: Trapezium | Disc, P: Presentation) -> Verification:
    """Check cells, gluing and the boundary witness of a diagram against ``P``."""
    problems: list[str] = []
    T = D.trapezium if isinstance(D, Disc) else D
    rels = P.relator_set
    cells: list[tuple[str, Cell]] = []
    for k, band in enumerate(T.bands):
        if k == 0 and band.bottom != T.computation.start:
            problems.append("band 0: bottom is not the start configuration")
        if k > 0 and T.bands[k - 1].top != band.bottom:
            problems.append(f"band {k}: bottom does not match the top of band {k - 1}")
        qs = sorted(c.where for c in band.q_cells)
        if qs != list(range(T.machine.N)):
            problems.append(f"band {k}: q-cells cover parts {qs}")
        for i, cell in enumerate(band.cells):
            if cell.boundary.representative not in rels:
                problems.append(f"cell c{k}_{i}: boundary {cell.boundary} is not a relator")
            cells.append((f"c{k}_{i}", cell))
    if T.bands and T.bands[-1].top != T.computation.end:
        problems.append("last band: top is not the final configuration")
    if isinstance(D, Disc):
        if D.hub_cell.boundary.representative not in rels:
            problems.append("hub cell: boundary is not a relator")
        if CyclicWord(cyclic_reduce(D.hub)[0].representative) != D.hub_cell.boundary:
            problems.append("hub cell: boundary differs from the hub word")
        if T.top != D.hub:
            problems.append("disc: trapezium does not end at the hub word")
        cells.append(("hub", D.hub_cell))
    if problems:
        return Verification(False, tuple(problems))
    try:
        wit = D.witness()
    except ValueError as exc:
        return Verification(False, (f"witness: {exc}",))
    if len(wit) != len(cells):
        problems.append(f"witness has {len(wit)} insertions for {len(cells)} cells")
    for (cid, cell), (_, rel) in zip(cells, wit):
        if not _same_cell(rel, cell):
            problems.append(f"cell {cid}: witness inserts {rel}, cell is {cell.boundary}")
            break
    if not problems:
        try:
            rest = replay(D.boundary, wit, P)
        except ValueError as exc:
            problems.append(f"replay: {exc}")
        else:
            if rest:
                problems.append(f"replay leaves {rest}")
    return Verification(not problems, tuple(problems))


# ---------------------------------------------------------------- graph export


def _producers(T: Trapezium, k: int) -> list[str]:
    """Cell id producing each letter of band ``k``'s top word."""
    band = T.bands[k]
    name, s = band.rule
    r = T.machine.rule(name)
    V = r.V if s == 1 else r.U
    a_ids = _a_ids(band, k)
    out: list[str] = []
    for i in range(T.machine.N):
        out.append(f"c{k}_{_q_index(band, i)}")
        if i < T.machine.N - 1:
            seg = _tag_reduce(
                [(x, f"c{k}_{_q_index(band, i)}") for x in V[i].right]
                + list(zip(band.residues[i], a_ids[i]))
                + [(x, f"c{k}_{_q_index(band, i + 1)}") for x in V[i + 1].left]
            )
            out.extend(t for _, t in seg)
    return out


def _consumers(T: Trapezium, k: int) -> list[str | None]:
    """Cell id in band ``k`` that absorbs each letter of the band's bottom word."""
    band = T.bands[k]
    name, s = band.rule
    r = T.machine.rule(name)
    U = r.U if s == 1 else r.V
    a_ids = _a_ids(band, k)
    out: list[str | None] = []
    for i in range(T.machine.N):
        out.append(f"c{k}_{_q_index(band, i)}")
        if i < T.machine.N - 1:
            t = band.bottom.tapes[i]
            tagged = (
                [(x, ("u", None)) for x in invert(U[i].right)]
                + [(x, ("t", p)) for p, x in enumerate(t)]
                + [(x, ("v", None)) for x in invert(U[i + 1].left)]
            )
            left, right = _cancelled(tagged)
            owner: dict[int, str] = {}
            for p in left:
                owner[p] = f"c{k}_{_q_index(band, i)}"
            for p in right:
                owner[p] = f"c{k}_{_q_index(band, i + 1)}"
            survivors = [p for p in range(len(t)) if p not in owner]
            for p, cid in zip(survivors, a_ids[i]):
                owner[p] = cid
            out.extend(owner.get(p) for p in range(len(t)))
    return out


def _q_index(band: Band, part: int) -> int:
    for i, c in enumerate(band.cells):
        if c.kind == "q" and c.where == part:
            return i
    raise ValueError(part)


def _a_ids(band: Band, k: int) -> list[list[str]]:
    ids: list[list[str]] = [[] for _ in band.residues]
    for i, c in enumerate(band.cells):
        if c.kind == "a":
            ids[c.where].append(f"c{k}_{i}")
    return ids


def _tag_reduce(items: list[tuple[tuple[str, int], str]]) -> list[tuple[tuple[str, int], str]]:
    out: list = []
    for x, tag in items:
        if out and out[-1][0][0] == x[0] and out[-1][0][1] == -x[1]:
            out.pop()
        else:
            out.append((x, tag))
    return out


def _cancelled(items: list) -> tuple[set[int], set[int]]:
    """Positions of tape letters cancelled by the left (u) and right (v) words."""
    stack: list = []
    left: set[int] = set()
    right: set[int] = set()
    for x, tag in items:
        if stack and stack[-1][0][0] == x[0] and stack[-1][0][1] == -x[1]:
            y, ytag = stack.pop()
            pair = {ytag[0], tag[0]}
            if pair == {"u", "t"}:
                left.add(ytag[1] if ytag[0] == "t" else tag[1])
            elif pair == {"t", "v"}:
                right.add(ytag[1] if ytag[0] == "t" else tag[1])
        else:
            stack.append((x, tag))
    return left, right


def _edges(T: Trapezium) -> list[tuple[str, str]]:
    edges: set[tuple[str, str]] = set()
    for k, band in enumerate(T.bands):
        for i in range(len(band.cells) - 1):
            edges.add((f"c{k}_{i}", f"c{k}_{i + 1}"))
    for k in range(len(T.bands) - 1):
        for p, c in zip(_producers(T, k), _consumers(T, k + 1)):
            if c is not None:
                edges.add((p, c))
    return sorted(edges)


def _hub_edges(T: Trapezium) -> list[tuple[str, str]]:
    if not T.bands:
        return []
    return sorted({(p, "hub") for p in _producers(T, len(T.bands) - 1)})


def _graph_diameter(nodes: Sequence[str], edges: Sequence[tuple[str, str]], limit: int) -> int | None:
    if len(nodes) > limit:
        return None
    if not nodes:
        return 0
    adj: dict[str, list[str]] = {n: [] for n in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    best = 0
    for src in nodes:
        dist = {src: 0}
        q = deque([src])
        while q:
            u = q.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    q.append(v)
        if len(dist) < len(nodes):
            return None
        best = max(best, max(dist.values()))
    return best


def export_dot(D: Trapezium | Disc) -> str:
    T = D.trapezium if isinstance(D, Disc) else D
    lines = ["digraph diagram {", "  node [shape=box];"]
    for k, band in enumerate(T.bands):
        lines.append(f"  subgraph band{k} {{")
        lines.append("    rank=same;")
        for i, cell in enumerate(band.cells):
            label = f"{cell.kind}:{cell.boundary}"
            lines.append(f'    c{k}_{i} [label="{label}", band={k}];')
        lines.append("  }")
    edges = _edges(T)
    if isinstance(D, Disc):
        lines.append(f'  hub [label="hub:{D.hub_cell.boundary}", shape=ellipse];')
        edges = edges + _hub_edges(T)
    for a, b in edges:
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
