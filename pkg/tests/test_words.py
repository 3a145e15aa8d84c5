import pytest
from hypothesis import given
from hypothesis import strategies as st

from smkit.words import (
    EMPTY,
    Alphabet,
    AlphabetError,
    CyclicWord,
    Letter,
    Word,
    concat,
    cyclic_reduce,
    cyclic_shifts,
    invert,
    join,
    parse_word,
    reduce,
    word,
)

letters = st.tuples(st.sampled_from(["a", "b", "c"]), st.sampled_from([1, -1]))
raw_words = st.lists(letters, max_size=12)
words = raw_words.map(reduce)


def test_reduce_cancels_adjacent_pairs():
    assert reduce([("a", 1), ("b", 1), ("b", -1), ("a", -1)]) == EMPTY
    assert reduce([("a", 1), ("b", 1), ("a", -1)]) == word("a", "b", "a^-1")


def test_reduce_rejects_bad_sign():
    with pytest.raises(ValueError):
        reduce([("a", 2)])


def test_parse_and_print_round_trip():
    w = parse_word("x y^-1 q")
    assert w == Word((("x", 1), ("y", -1), ("q", 1)))
    assert str(w) == "x y^-1 q"
    assert parse_word(str(w)) == w


def test_empty_word_prints_as_one():
    assert str(EMPTY) == "1"
    assert parse_word("1") == EMPTY
    assert parse_word("") == EMPTY


@pytest.mark.parametrize("bad", ["x^", "a;b", "1"])
def test_invalid_letter_names(bad):
    with pytest.raises(AlphabetError):
        Letter(bad)


def test_parse_reduces():
    assert parse_word("a a^-1 b") == word("b")


def test_alphabet_check():
    A = Alphabet(["a", "b"])
    A.check(word("a", "b^-1"))
    with pytest.raises(AlphabetError):
        A.check(word("c"))
    with pytest.raises(AlphabetError):
        parse_word("c", A)


def test_alphabet_union_and_equality():
    A = Alphabet(["a"]).union(Alphabet(["b"]))
    assert A == Alphabet(["b", "a"])
    assert "a" in A and len(A) == 2


def test_word_power_and_inverse():
    w = word("a", "b")
    assert w**2 == word("a", "b", "a", "b")
    assert w**-1 == word("b^-1", "a^-1")
    assert w * w.inverse() == EMPTY


@given(raw_words)
def test_reduce_is_idempotent(raw):
    w = reduce(raw)
    assert reduce(w) == w
    assert all(not (x[0] == y[0] and x[1] == -y[1]) for x, y in zip(w, w[1:]))


@given(words, words, words)
def test_concat_is_associative(u, v, w):
    assert concat(concat(u, v), w) == concat(u, concat(v, w))


@given(words)
def test_inverse_is_involutive_and_cancels(w):
    assert invert(invert(w)) == w
    assert concat(w, invert(w)) == EMPTY


@given(raw_words, raw_words)
def test_concat_matches_reduce_of_join(a, b):
    assert concat(reduce(a), reduce(b)) == reduce(list(a) + list(b))


@given(words)
def test_cyclic_reduce_round_trip(w):
    core, c = cyclic_reduce(w)
    assert join(c, core.representative, invert(c)) == w
    r = core.representative
    assert len(r) <= 1 or not (r[0][0] == r[-1][0] and r[0][1] == -r[-1][1])


def test_cyclic_reduce_examples():
    core, c = cyclic_reduce(word("x", "a", "b", "x^-1"))
    assert core == CyclicWord(word("a", "b")) and c == word("x")
    core, c = cyclic_reduce(word("a", "b"))
    assert c == EMPTY


@given(words)
def test_cyclic_word_equality_up_to_rotation(w):
    core, _ = cyclic_reduce(w)
    for s in cyclic_shifts(core.representative):
        assert CyclicWord(s) == core
        assert hash(CyclicWord(s)) == hash(core)


def test_cyclic_word_rejects_unreduced():
    with pytest.raises(ValueError):
        CyclicWord(word("a", "b", "a^-1"))


def test_cyclic_word_distinguishes_inverse():
    c = CyclicWord(word("a", "b"))
    assert c != c.inverse()
    assert c.inverse().inverse() == c
