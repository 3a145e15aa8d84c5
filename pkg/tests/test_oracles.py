from fractions import Fraction

import pytest

from oracles import FROZEN_STEPS, adding_invariant, counter_closed_form, counter_steps, trailing_ones
from smkit.words import EMPTY, parse_word


@pytest.mark.parametrize("n", sorted(FROZEN_STEPS))
def test_counter_matches_closed_form_and_frozen(n):
    assert counter_steps(n) == counter_closed_form(n) == FROZEN_STEPS[n]


def test_counter_rejects_zero():
    with pytest.raises(ValueError):
        counter_steps(0)


def test_trailing_ones():
    assert [trailing_ones(k) for k in range(8)] == [0, 1, 0, 2, 0, 1, 0, 3]


def test_invariant_values():
    # frac(-1 . a0^-1) = frac(-1/2)
    assert adding_invariant(("L", "p1", "R"), (parse_word("a0^-1"), EMPTY)) == Fraction(1, 2)
    assert adding_invariant(("L", "p1", "R"), (parse_word("a0 a0"), EMPTY)) == 0
    assert adding_invariant(("L", "p3", "R"), (parse_word("a1"), EMPTY)) is None
    assert adding_invariant(("L", "p3", "R"), (parse_word("a0"), EMPTY)) == 0
