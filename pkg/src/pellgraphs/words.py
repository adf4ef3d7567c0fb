"""Pell strings (words over {0, 1, 22}) and Fibonacci strings.

A word is stored as a tuple of small integers, one per position, so the
word over {0, 1, 22} written ``1221`` is ``(1, 2, 2, 1)``. Sets of words
of the same length are also available as read-only ``uint8`` matrices
(one row per word) in canonical order, which for both families coincides
with the lexicographic order of the rows.

"""
from collections.abc import Sequence
from functools import lru_cache
from typing import Union

import numpy as np

from .seq import fibonacci, pell

PellString = tuple[int, ...]
FibonacciString = tuple[int, ...]
WordLike = Union[str, Sequence[int]]

_SYMBOLS = {"0": 0, "1": 1, "2": 2}


def as_symbols(word: WordLike) -> tuple[int, ...]:
    """Convert a textual or integer word into a tuple of symbols.

    Symbols are not checked against the Pell string rules, only against the
    alphabet {0, 1, 2}.

    """
    if isinstance(word, str):
        try:
            return tuple(_SYMBOLS[c] for c in word)
        except KeyError as err:
            raise ValueError(f"invalid symbol {err.args[0]!r} in word {word!r}") from None

    symbols = tuple(int(s) for s in word)
    if any(s not in (0, 1, 2) for s in symbols):
        raise ValueError(f"invalid symbol in word {symbols!r}, must be one of 0, 1, 2")
    return symbols


def format_word(word: WordLike) -> str:
    """Textual form of a word, e.g. ``"1221"`` (the empty word prints as ``""``)."""
    if isinstance(word, str):
        return word
    return "".join(str(int(s)) for s in word)


def validate(word: WordLike) -> bool:
    """Return True if ``word`` is a Pell string.

    Every maximal run of 2s must have even length, i.e. the word parses
    left to right as a word over {0, 1, 22}.

    """
    try:
        symbols = as_symbols(word)
    except ValueError:
        return False

    run = 0
    for s in symbols:
        if s == 2:
            run += 1
        else:
            if run % 2:
                return False
            run = 0
    return run % 2 == 0


def parse_pell(word: WordLike) -> PellString:
    """Return ``word`` as a tuple of symbols, raising if it is not a Pell string."""
    symbols = as_symbols(word)
    if not validate(symbols):
        raise ValueError(f"{format_word(symbols)!r} is not a Pell string")
    return symbols


def _check_length(n: int):
    if n < 0:
        raise ValueError(f"word length must be non-negative, found {n}")


def _prepend(prefix: tuple[int, ...], block: np.ndarray) -> np.ndarray:
    head = np.broadcast_to(np.array(prefix, dtype=np.uint8), (block.shape[0], len(prefix)))
    return np.hstack([head, block])


@lru_cache(maxsize=None)
def pell_words(n: int) -> np.ndarray:
    """Return all Pell strings of length ``n`` as a ``(p_n, n)`` matrix.

    Rows follow the canonical recursive order: the block 0P_{n-1}, then
    1P_{n-1}, then 22P_{n-2}.

    """
    _check_length(n)

    levels = [np.zeros((1, 0), dtype=np.uint8), np.array([[0], [1]], dtype=np.uint8)]
    for k in range(2, n + 1):
        levels.append(
            np.vstack(
                [
                    _prepend((0,), levels[k - 1]),
                    _prepend((1,), levels[k - 1]),
                    _prepend((2, 2), levels[k - 2]),
                ]
            )
        )

    words = levels[n]
    words.flags.writeable = False
    return words


@lru_cache(maxsize=None)
def fibonacci_words(n: int) -> np.ndarray:
    """Return all Fibonacci strings of length ``n`` as a ``(F_{n+2}, n)`` matrix,
    in the recursive order 0F_{n-1} then 10F_{n-2}.

    """
    _check_length(n)

    levels = [np.zeros((1, 0), dtype=np.uint8), np.array([[0], [1]], dtype=np.uint8)]
    for k in range(2, n + 1):
        levels.append(np.vstack([_prepend((0,), levels[k - 1]), _prepend((1, 0), levels[k - 2])]))

    words = levels[n]
    words.flags.writeable = False
    return words


def generate_pell(n: int) -> list[PellString]:
    """List of all Pell strings of length ``n`` in canonical order."""
    words = [tuple(row) for row in pell_words(n).tolist()]
    assert len(words) == pell(n)
    return words


def generate_fibonacci(n: int) -> list[FibonacciString]:
    """List of all Fibonacci strings of length ``n`` in recursive order."""
    words = [tuple(row) for row in fibonacci_words(n).tolist()]
    assert len(words) == fibonacci(n + 2)
    return words


def word_keys(words: np.ndarray, base: int) -> np.ndarray:
    """Encode each row of ``words`` as an integer in the given base.

    Keys increase with the lexicographic order of the rows, so the keys of
    :func:`pell_words` (base 3) and :func:`fibonacci_words` (base 2) are sorted.

    """
    n = words.shape[1]
    weights = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return words.astype(np.int64) @ weights


def rank(word: WordLike) -> int:
    """Index of ``word`` in :func:`generate_pell` of its length."""
    symbols = parse_pell(word)
    n = len(symbols)

    r = 0
    pos = 0
    while pos < n:
        rest = n - pos
        s = symbols[pos]
        if s == 0:
            pos += 1
        elif s == 1:
            r += pell(rest - 1)
            pos += 1
        else:
            r += 2 * pell(rest - 1)
            pos += 2
    return r


def unrank(n: int, r: int) -> PellString:
    """Pell string of length ``n`` at index ``r`` of the canonical order."""
    _check_length(n)
    if not 0 <= r < pell(n):
        raise IndexError(f"rank {r} out of range for Pell strings of length {n} (0..{pell(n) - 1})")

    symbols = []
    rest = n
    while rest > 0:
        block = pell(rest - 1)
        if r < block:
            symbols.append(0)
            rest -= 1
        elif r < 2 * block:
            symbols.append(1)
            r -= block
            rest -= 1
        else:
            symbols.extend((2, 2))
            r -= 2 * block
            rest -= 2
    return tuple(symbols)


def rewrite_neighbors(word: WordLike) -> set[PellString]:
    """Return the Pell strings adjacent to ``word`` in the Pell graph.

    Neighbours are obtained by flipping a single 0 to 1 (or back), by
    replacing a factor 11 with 22 (overlapping factors each count) or by
    replacing a 22 pair with 11.

    """
    symbols = parse_pell(word)
    n = len(symbols)
    neighbors = set()

    pos = 0
    while pos < n:
        s = symbols[pos]
        if s == 2:
            neighbors.add(symbols[:pos] + (1, 1) + symbols[pos + 2 :])
            pos += 2
            continue

        neighbors.add(symbols[:pos] + (1 - s,) + symbols[pos + 1 :])
        if s == 1 and pos + 1 < n and symbols[pos + 1] == 1:
            neighbors.add(symbols[:pos] + (2, 2) + symbols[pos + 2 :])
        pos += 1

    return neighbors
