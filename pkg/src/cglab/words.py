"""Letters, words, free and cyclic reduction, rotations.

A word is a plain ``tuple`` of letter indices.  The letter order used for
lexicographic comparison is the index order, so comparing two words is just
tuple comparison.  An :class:`Alphabet` carries the tokens used to print and
parse words together with the inversion involution.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Word = tuple  # tuple[int, ...]

EMPTY: Word = ()


@dataclass(frozen=True)
class Alphabet:
    """A finite ordered alphabet with an involutive inversion.

    ``tokens[i]`` is the printed name of letter ``i`` and ``inverse[i]`` the
    index of its inverse.  Letter ``i`` sorts before letter ``j`` iff
    ``i < j``.
    """

    tokens: tuple
    inverse: tuple
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.tokens) != len(self.inverse):
            raise ValueError("tokens and inverse differ in length")
        if len(set(self.tokens)) != len(self.tokens):
            raise ValueError("duplicate tokens")
        for i, j in enumerate(self.inverse):
            if not 0 <= j < len(self.tokens) or self.inverse[j] != i:
                raise ValueError(f"inverse is not an involution at letter {i}")
        for t in self.tokens:
            if not t or "," in t or t == "$":
                raise ValueError(f"bad token {t!r}")
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.tokens)})

    def __len__(self):
        return len(self.tokens)

    @property
    def single_char(self) -> bool:
        return all(len(t) == 1 for t in self.tokens)

    def index(self, token: str) -> int:
        try:
            return self._index[token]
        except KeyError:
            raise ValueError(f"unknown letter {token!r}") from None

    def parse(self, text: str) -> Word:
        """Parse a word; ``""`` is the identity.

        Single-character alphabets accept plain strings such as ``"abAB"``;
        otherwise tokens are comma separated (``"x3,X7"``).
        """
        text = text.strip()
        if not text:
            return EMPTY
        if "," in text or not self.single_char:
            parts = [p.strip() for p in text.split(",")]
        else:
            parts = list(text)
        return tuple(self.index(p) for p in parts)

    def format(self, w: Sequence[int]) -> str:
        if self.single_char:
            return "".join(self.tokens[x] for x in w)
        return ",".join(self.tokens[x] for x in w)

    def invert(self, w: Sequence[int]) -> Word:
        inv = self.inverse
        return tuple(inv[x] for x in reversed(w))

    def to_json(self) -> str:
        return json.dumps({"tokens": list(self.tokens), "inverse": list(self.inverse)},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Alphabet":
        d = json.loads(text)
        return cls(tuple(d["tokens"]), tuple(d["inverse"]))


def free_alphabet(rank: int) -> Alphabet:
    """Alphabet of the free group of the given rank, ordered a < A < b < B < ...

    Ranks up to 13 use the single letters a..m; larger ranks use ``x1, X1, ...``.
    """
    if rank < 1:
        raise ValueError("rank must be positive")
    tokens = []
    if rank <= 13:
        for i in range(rank):
            c = chr(ord("a") + i)
            tokens += [c, c.upper()]
    else:
        for i in range(1, rank + 1):
            tokens += [f"x{i}", f"X{i}"]
    inverse = []
    for i in range(rank):
        inverse += [2 * i + 1, 2 * i]
    return Alphabet(tuple(tokens), tuple(inverse))


def free_reduce(w: Iterable[int], inverse: Sequence[int]) -> Word:
    """Cancel adjacent inverse pairs until none remain (single stack pass)."""
    out: list = []
    for x in w:
        if out and out[-1] == inverse[x]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_freely_reduced(w: Sequence[int], inverse: Sequence[int]) -> bool:
    return all(inverse[w[i]] != w[i + 1] for i in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[int], inverse: Sequence[int]) -> bool:
    if not is_freely_reduced(w, inverse):
        return False
    return len(w) < 2 or inverse[w[0]] != w[-1]


def cyclic_reduce(w: Iterable[int], inverse: Sequence[int]) -> Word:
    """Freely reduce, then strip matching inverse letters from both ends."""
    r = free_reduce(w, inverse)
    i, j = 0, len(r)
    while j - i >= 2 and inverse[r[i]] == r[j - 1]:
        i += 1
        j -= 1
    return r[i:j]


def rotations(w: Word) -> list:
    if not w:
        return [EMPTY]
    return [w[i:] + w[:i] for i in range(len(w))]


def lex_min_rotation(w: Word) -> Word:
    """Least rotation of ``w`` (Booth's algorithm, linear time)."""
    n = len(w)
    if n < 2:
        return tuple(w)
    s = tuple(w) + tuple(w)
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return s[k:k + n]


def smallest_period(w: Word) -> int:
    """Least ``p`` dividing ``len(w)`` with ``w == w[:p] * (len(w) // p)``."""
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return p
    return n
