import dataclasses
import re

import pytest

from smkit import diagrams
from smkit.diagrams import Cell, disc, export_dot, free_history, theta_band, trapezium, verify
from smkit.grouplab import copy_configuration, even_recognizer, hub_group, lift_computation, recognize
from smkit.presentations import replay
from smkit.smachine import Bounds, adding_machine, explore, presentation_of, replay_history
from smkit.words import EMPTY, CyclicWord, join, parse_word, word

Z = adding_machine(["a"])
PZ = presentation_of(Z)


def walk():
    # the first six steps of the run on a0 a0
    start = Z.configuration("L a0 a0 p1 R")
    full = explore(Z, start, lambda c: c.states[1] == "p3", Bounds(max_space=5)).computation
    return replay_history(Z, start, full.history[:6])


def test_band_cells_match_residues():
    c = Z.configuration("L a0 a0 p1 R")
    band = theta_band(Z, ("r12a", 1), c)
    assert [cell.kind for cell in band.cells].count("q") == 3
    a_cells = [cell for cell in band.cells if cell.kind == "a"]
    assert len(a_cells) == sum(len(z) for z in band.residues)


def test_trapezium_area_and_boundary():
    T = trapezium(Z, walk())
    assert T.area == sum(len(b.cells) for b in T.bands)
    assert len(T.side) == 6
    assert replay(T.boundary, T.witness(), PZ) == EMPTY
    assert verify(T, PZ)
    assert T.diameter_bound == T.computation.time + T.computation.space


def test_free_history_removes_backtracks():
    comp = replay_history(Z, Z.configuration("L a0 p1 R"), ["r12a", ("r12a", -1), "r1a"])
    f = free_history(comp)
    assert f.history == (("r1a", 1),)
    assert trapezium(Z, comp).area == trapezium(Z, f).area


def test_empty_computation():
    comp = replay_history(Z, Z.configuration("L a0 p1 R"), [])
    T = trapezium(Z, comp)
    assert T.area == 0 and T.witness() == [] and verify(T, PZ)


def test_corrupted_cell_is_detected():
    T = trapezium(Z, walk())
    band = T.bands[1]
    bad_cell = Cell(CyclicWord(parse_word("a0 a1")), "a", 0, "a0")
    bad = dataclasses.replace(band, cells=(bad_cell,) + band.cells[1:])
    T2 = diagrams.Trapezium(T.machine, T.computation, T.bands[:1] + (bad,) + T.bands[2:])
    v = verify(T2, PZ)
    assert not v and "not a relator" in str(v)


def test_wrong_gluing_is_detected():
    T = trapezium(Z, walk())
    T2 = diagrams.Trapezium(T.machine, T.computation, (T.bands[1], T.bands[0]) + T.bands[2:])
    assert not verify(T2, PZ)


def test_wrong_presentation_is_detected():
    T = trapezium(Z, walk())
    other = presentation_of(adding_machine(["b"]))
    assert not verify(T, other)


def even_disc(k: int):
    R = even_recognizer()
    H = hub_group(R.machine, 9)
    res = recognize(R, word(*(["x"] * k)), Bounds(max_steps=20, max_space=12))
    return disc(H.machine, H.hub, lift_computation(res.computation, 9)), H


def test_disc_for_x_squared():
    D, H = even_disc(2)
    assert D.area == D.trapezium.area + 1 == 37
    assert verify(D, H.presentation)
    assert D.boundary == D.trapezium.bottom
    assert replay(D.boundary, D.witness(), H.presentation) == EMPTY


def test_disc_rejects_non_hub_end():
    R = even_recognizer()
    H = hub_group(R.machine, 9)
    comp = replay_history(H.machine, copy_configuration(R.encode(parse_word("x x")), 9), [])
    with pytest.raises(ValueError):
        disc(H.machine, H.hub, comp)


def test_disc_hub_mismatch_detected():
    D, H = even_disc(0)
    other = dataclasses.replace(D, hub_cell=Cell(CyclicWord(parse_word("q1 q2")), "hub"))
    assert not verify(other, H.presentation)


def test_dot_export_ids():
    T = trapezium(Z, walk())
    dot = export_dot(T)
    ids = set(re.findall(r"^\s+(c\d+_\d+) \[", dot, re.M))
    assert ids == set(T.cell_ids())
    for a, b in re.findall(r"(c\d+_\d+) -> (c\d+_\d+);", dot):
        assert a in ids and b in ids
    D, _ = even_disc(0)
    assert "hub [" in export_dot(D) and "-> hub;" in export_dot(D)


def test_diameter():
    T = trapezium(Z, walk())
    d = T.diameter()
    assert d is not None and 0 < d <= T.area
    assert T.diameter(limit=1) is None
    D, _ = even_disc(2)
    assert D.diameter() is not None and D.diameter() <= len(D.trapezium.bands) + D.trapezium.computation.space


def test_witness_length_equals_area():
    T = trapezium(Z, walk())
    assert len(T.witness()) == T.area
    D, _ = even_disc(2)
    assert len(D.witness()) == D.area


def test_boundary_is_trivial():
    T = trapezium(Z, walk())
    h = T.side
    assert T.boundary == join(h.inverse(), T.bottom, h, T.top.inverse())
