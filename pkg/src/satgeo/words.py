"""Assignment words and three-valued words.

Boolean assignments are packed into Python ints / uint64 words, bit i holding
the value of variable i (little-endian).  Three-valued strings over {0, 1, *}
are stored as int8 arrays with -1 encoding *.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

STAR = -1

_STAR_CHAR = "*"


def word_from_bits(bits: Sequence[int]) -> int:
    """Pack a 0/1 sequence (index = variable) into an integer word."""
    w = 0
    for i, b in enumerate(bits):
        if b:
            w |= 1 << i
    return w


def bits_from_word(word: int, n: int) -> np.ndarray:
    """Unpack an integer word into a length-n uint8 array of 0/1 values."""
    return (int(word) >> np.arange(n, dtype=np.uint64)).astype(np.uint64) & np.uint64(1) != 0


def words_to_bit_matrix(words: np.ndarray, n: int) -> np.ndarray:
    """Unpack an array of words into a (len, n) uint8 matrix."""
    words = np.asarray(words, dtype=np.uint64)
    shifts = np.arange(n, dtype=np.uint64)
    return ((words[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)


def hamming(a: int, b: int) -> int:
    return (int(a) ^ int(b)).bit_count()


class TriAssignment:
    """A length-n word over {0, 1, *}.

    Used both for coarsening states and for cluster projections; * marks a
    variable that is unconstrained (coarsened away, or taking both values).
    """

    __slots__ = ("symbols",)

    def __init__(self, symbols: Iterable[int] | np.ndarray):
        arr = np.asarray(list(symbols) if not isinstance(symbols, np.ndarray) else symbols,
                         dtype=np.int8)
        if arr.ndim != 1:
            raise ValueError("symbols must be one-dimensional")
        if not np.isin(arr, (0, 1, STAR)).all():
            raise ValueError("symbols must be 0, 1, or -1 (star)")
        self.symbols = arr
        self.symbols.setflags(write=False)

    @classmethod
    def from_string(cls, text: str) -> "TriAssignment":
        return cls([STAR if c == _STAR_CHAR else int(c) for c in text])

    @classmethod
    def from_assignment(cls, bits: Sequence[int]) -> "TriAssignment":
        return cls([int(bool(b)) for b in bits])

    @classmethod
    def all_star(cls, n: int) -> "TriAssignment":
        return cls(np.full(n, STAR, dtype=np.int8))

    @classmethod
    def from_word(cls, word: int, n: int) -> "TriAssignment":
        return cls(bits_from_word(word, n).astype(np.int8))

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i: int) -> int:
        return int(self.symbols[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriAssignment):
            return NotImplemented
        return len(self) == len(other) and bool((self.symbols == other.symbols).all())

    def __hash__(self) -> int:
        return hash(self.symbols.tobytes())

    def __str__(self) -> str:
        return "".join(_STAR_CHAR if s == STAR else str(s) for s in self.symbols)

    def __repr__(self) -> str:
        return f"TriAssignment('{self}')"

    @property
    def star_count(self) -> int:
        return int((self.symbols == STAR).sum())

    @property
    def star_mask(self) -> np.ndarray:
        return self.symbols == STAR

    def is_star(self, i: int) -> bool:
        return self.symbols[i] == STAR

    def dominates(self, other: "TriAssignment") -> bool:
        """True iff other <= self: positions agree wherever self is not *."""
        s, o = self.symbols, other.symbols
        if len(s) != len(o):
            raise ValueError("length mismatch")
        return bool(((s == STAR) | (s == o)).all())

    def with_star(self, i: int) -> "TriAssignment":
        arr = self.symbols.copy()
        arr[i] = STAR
        return TriAssignment(arr)
