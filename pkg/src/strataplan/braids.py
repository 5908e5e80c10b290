"""Braid words, linking numbers and the invariants built on them.

Words are sequences of signed generator indices (``+i`` crosses the strands at
positions ``i`` and ``i+1`` positively, ``-i`` negatively; positions and
strands are numbered from 1).  Strands are tracked by threading their initial
positions through the word, and the linking number of a strand pair is half
its signed crossing count, which is an integer exactly when the braid is
pure.  Everything here sits at the abelianisation level: there is no word
problem solver and no normal form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import IndexOutOfRange, NotPure, OddCrossingParity, SizeMismatch


@dataclass(frozen=True)
class BraidWord:
    """A word in the standard generators of the braid group on ``n`` strands."""

    n: int
    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("strand count must be at least 1")
        letters = tuple(int(v) for v in self.letters)
        for v in letters:
            if v == 0 or not 1 <= abs(v) <= self.n - 1:
                raise IndexOutOfRange(
                    f"generator index {v} outside 1..{self.n - 1}"
                )
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.n != other.n:
            raise SizeMismatch("words on different strand counts")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, tuple(-v for v in reversed(self.letters)))

    def to_text(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(
            f"s{abs(v)}" if v > 0 else f"s{abs(v)}^-1" for v in self.letters
        )

    @classmethod
    def from_text(cls, n: int, text: str) -> "BraidWord":
        """Parse words like ``"s1 s2^-1 s2 s1"``; ``e`` is the empty word and
        integer exponents are expanded."""
        letters: list[int] = []
        for token in text.split():
            if token == "e":
                continue
            m = re.fullmatch(r"s(\d+)(?:\^(-?\d+))?", token)
            if not m:
                raise ValueError(f"cannot parse braid letter {token!r}")
            idx = int(m.group(1))
            exp = int(m.group(2)) if m.group(2) else 1
            sign = 1 if exp > 0 else -1
            letters.extend([sign * idx] * abs(exp))
        return cls(n, tuple(letters))


def _thread(word: BraidWord) -> tuple[dict[tuple[int, int], int], list[int]]:
    """Signed crossing counts per strand pair, plus the final strand order.

    ``at[p]`` is the strand occupying position ``p`` (0-based) after the word.
    """
    n = word.n
    at = list(range(n))
    counts: dict[tuple[int, int], int] = {}
    for letter in word.letters:
        p = abs(letter) - 1
        s, t = at[p], at[p + 1]
        key = (s, t) if s < t else (t, s)
        counts[key] = counts.get(key, 0) + (1 if letter > 0 else -1)
        at[p], at[p + 1] = at[p + 1], at[p]
    return counts, at


def permutation_of(word: BraidWord) -> tuple[int, ...]:
    """Image of each strand under the word: entry ``i-1`` is the final
    position (1-based) of the strand that started at position ``i``."""
    _, at = _thread(word)
    perm = [0] * word.n
    for pos, strand in enumerate(at):
        perm[strand] = pos + 1
    return tuple(perm)


def is_pure(word: BraidWord) -> bool:
    """Whether every strand returns to its starting position."""
    return permutation_of(word) == tuple(range(1, word.n + 1))


@dataclass(frozen=True)
class LinkingMatrix:
    """Symmetric integer table of pairwise strand linking numbers."""

    n: int
    entries: tuple[int, ...]  # lexicographic pair order (1,2), (1,3), ..., (n-1,n)

    def __post_init__(self) -> None:
        want = self.n * (self.n - 1) // 2
        if len(self.entries) != want:
            raise ValueError(f"expected {want} entries, got {len(self.entries)}")

    @staticmethod
    def _pair_index(n: int, i: int, j: int) -> int:
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise IndexOutOfRange(f"bad strand pair ({i}, {j})")
        if i > j:
            i, j = j, i
        return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)

    def __getitem__(self, pair: tuple[int, int]) -> int:
        i, j = pair
        return self.entries[self._pair_index(self.n, i, j)]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.entries)

    def row_nonzero(self, i: int) -> int:
        """Number of strands with nonzero linking against strand ``i``."""
        return sum(1 for j in range(1, self.n + 1) if j != i and self[i, j] != 0)

    def relabeled(self, perm: Sequence[int]) -> "LinkingMatrix":
        """Matrix of the conjugated braid: entry ``(i, j)`` of the result is
        the entry ``(perm[i-1], perm[j-1])`` of this matrix."""
        if len(perm) != self.n:
            raise SizeMismatch("permutation length disagrees with strand count")
        vals = []
        for i in range(1, self.n + 1):
            for j in range(i + 1, self.n + 1):
                vals.append(self[perm[i - 1], perm[j - 1]])
        return LinkingMatrix(self.n, tuple(vals))

    def as_dict(self) -> dict[tuple[int, int], int]:
        out = {}
        for i in range(1, self.n + 1):
            for j in range(i + 1, self.n + 1):
                out[(i, j)] = self[i, j]
        return out


def linking_matrix(word: BraidWord) -> LinkingMatrix:
    """Half the signed crossing count of every strand pair."""
    if not is_pure(word):
        raise NotPure("linking numbers are defined for pure braids only")
    counts, _ = _thread(word)
    vals = []
    for i in range(word.n):
        for j in range(i + 1, word.n):
            c = counts.get((i, j), 0)
            if c % 2 != 0:
                raise OddCrossingParity(
                    f"strands {i + 1},{j + 1} crossed an odd signed count {c}"
                )
            vals.append(c // 2)
    return LinkingMatrix(word.n, tuple(vals))


def in_commutator_subgroup(word: BraidWord) -> bool:
    """Whether the pure word has all linking numbers zero."""
    return linking_matrix(word).is_zero()


def conjugate(word: BraidWord, g: BraidWord) -> BraidWord:
    """The word ``g * word * g^-1``."""
    if word.n != g.n:
        raise SizeMismatch("words on different strand counts")
    return g * word * g.inverse()


def conjugation_image(word: BraidWord, g: BraidWord) -> LinkingMatrix:
    """Linking matrix of ``g * word * g^-1``, computed both directly and by
    relabelling through the permutation of ``g``; the two must agree."""
    direct = linking_matrix(conjugate(word, g))
    relabeled = linking_matrix(word).relabeled(permutation_of(g))
    if direct != relabeled:
        raise RuntimeError("conjugation image disagrees with permutation relabelling")
    return direct


def concentric_generator(n: int, l: int) -> BraidWord:
    """The pure braid whose strand ``l`` makes one full circuit around strands
    ``l+1 .. n``: it links each of them once and nothing else."""
    if not 1 <= l <= n - 1:
        raise IndexOutOfRange(f"generator index {l} outside 1..{n - 1}")
    down = list(range(l, n))
    letters = down + list(reversed(down))
    return BraidWord(n, tuple(letters))


def encircling_generator(n: int, j: int) -> BraidWord:
    """The pure braid whose strand ``j`` makes one full circuit around strands
    ``1 .. j-1``."""
    if not 2 <= j <= n:
        raise IndexOutOfRange(f"strand {j} outside 2..{n}")
    down = list(range(j - 1, 0, -1))
    letters = down + list(reversed(down))
    return BraidWord(n, tuple(letters))


def hub_property(word: BraidWord, k: int) -> bool:
    """Whether some strand has nonzero linking with at least ``k`` others."""
    if not 1 <= k <= word.n - 1:
        raise IndexOutOfRange(f"hub size {k} outside 1..{word.n - 1}")
    matrix = linking_matrix(word)
    return any(matrix.row_nonzero(i) >= k for i in range(1, word.n + 1))


def linking_rank(words: Iterable[BraidWord]) -> int:
    """Rank over the rationals of the linking vectors of the given pure words,
    by exact fraction-free elimination."""
    rows = [list(linking_matrix(w).entries) for w in words]
    if not rows:
        return 0
    cols = len(rows[0])
    if any(len(r) != cols for r in rows):
        raise SizeMismatch("words on different strand counts")
    rank = 0
    col = 0
    while rank < len(rows) and col < cols:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [pv * a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def word_to_text(word: BraidWord) -> str:
    return word.to_text()


def parse_word(n: int, text: str) -> BraidWord:
    return BraidWord.from_text(n, text)
