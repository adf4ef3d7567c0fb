import numpy as np
import pytest
from hypothesis import given

from pellgraphs.seq import fibonacci, pell
from pellgraphs.words import (
    as_symbols,
    fibonacci_words,
    format_word,
    generate_fibonacci,
    generate_pell,
    parse_pell,
    pell_words,
    rank,
    rewrite_neighbors,
    unrank,
    validate,
    word_keys,
)

from .utils import pell_strings


@pytest.mark.parametrize(
    "word, expected",
    [
        ("", True),
        ("0", True),
        ("22", True),
        ("1221", True),
        ("2222", True),
        ("2", False),
        ("12", False),
        ("222", False),
        ("0220", True),
        ("2022", False),
        ("13", False),
    ],
)
def test_validate(word, expected):
    assert validate(word) is expected


def test_as_symbols():
    assert as_symbols("1221") == (1, 2, 2, 1)
    assert as_symbols([0, 1]) == (0, 1)

    with pytest.raises(ValueError, match=r"invalid symbol '3'"):
        as_symbols("03")

    with pytest.raises(ValueError, match=r"invalid symbol"):
        as_symbols([0, 5])


def test_parse_pell():
    assert parse_pell("122") == (1, 2, 2)

    with pytest.raises(ValueError, match=r"'212' is not a Pell string"):
        parse_pell("212")


def test_generate_pell_small():
    assert generate_pell(0) == [()]
    assert [format_word(w) for w in generate_pell(2)] == ["00", "01", "10", "11", "22"]


def test_generate_counts():
    for n in range(0, 13):
        assert len(generate_pell(n)) == pell(n)
        assert len(generate_fibonacci(n)) == fibonacci(n + 2)


def test_pell_words_sorted_and_valid():
    words = pell_words(6)

    assert words.shape == (pell(6), 6)
    assert not words.flags.writeable
    assert np.all(np.diff(word_keys(words, 3)) > 0)
    assert all(validate(row) for row in words.tolist())


def test_fibonacci_words():
    words = fibonacci_words(5)

    assert np.all(np.diff(word_keys(words, 2)) > 0)
    # no two consecutive ones
    assert not np.any((words[:, 1:] == 1) & (words[:, :-1] == 1))


def test_word_length_error():
    with pytest.raises(ValueError, match=r"must be non-negative"):
        pell_words(-1)


def test_rank_unrank():
    assert rank("22") == 4
    assert rank("11") == 3
    assert unrank(2, 4) == (2, 2)


@pytest.mark.parametrize("n", range(13))
def test_rank_unrank_bijection(n):
    for r, word in enumerate(generate_pell(n)):
        assert rank(word) == r
        assert unrank(n, r) == word


def test_unrank_error():
    with pytest.raises(IndexError, match=r"rank 5 out of range"):
        unrank(2, 5)


@given(pell_strings())
def test_rank_roundtrip(word):
    assert format_word(unrank(len(word), rank(word))) == word


@pytest.mark.parametrize(
    "word, expected",
    [
        ("", set()),
        ("0", {"1"}),
        ("11", {"01", "10", "22"}),
        ("111", {"011", "101", "110", "221", "122"}),
        ("22", {"11"}),
    ],
)
def test_rewrite_neighbors(word, expected):
    assert {format_word(w) for w in rewrite_neighbors(word)} == expected


@given(pell_strings())
def test_rewrite_neighbors_symmetric(word):
    for neighbor in rewrite_neighbors(word):
        assert validate(neighbor)
        assert parse_pell(word) in rewrite_neighbors(neighbor)
