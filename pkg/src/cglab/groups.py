"""Computable group models: free groups and free products of two finite
cyclic groups.

Both families have unique geodesic normal forms over their generating sets,
and conjugacy reduces to cyclic permutation of cyclic normal forms.  That is
all the rest of the package relies on, so both models share one interface
driven by a single "may follow" relation on letters: a word is geodesic iff
each letter may follow the previous one, and it is a conjugacy geodesic iff
additionally the first letter may follow the last.
"""
from __future__ import annotations

import re
from functools import cached_property
from typing import Iterator

from .errors import ResourceCap, TorsionInput
from .fsa import Dfa
from .words import (EMPTY, Alphabet, Word, cyclic_reduce, free_alphabet, free_reduce,
                    lex_min_rotation, smallest_period)

#: Enumeration cap: largest sphere we are willing to stream.
MAX_SPHERE_SIZE = 10**7


class TorsionClass:
    """The single commensurability class of all finite-order elements."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TorsionClass"

    def __reduce__(self):
        return (TorsionClass, ())


TORSION = TorsionClass()


class GroupModel:
    """Common interface; subclasses set ``alphabet`` and implement the
    letter relation and normal forms."""

    alphabet: Alphabet
    descriptor: str
    max_finite_order: int  # M(G)

    def __init__(self, enum_cap: int | None = None):
        self.enum_cap = self._default_cap() if enum_cap is None else enum_cap

    def __repr__(self):
        return f"{type(self).__name__}({self.descriptor!r})"

    def __eq__(self, other):
        return isinstance(other, GroupModel) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    # -- letter relation --------------------------------------------------

    def follows(self, x: int, y: int) -> bool:
        """True iff ``y`` may come right after ``x`` in a geodesic word."""
        raise NotImplementedError

    @cached_property
    def successors(self) -> tuple:
        n = len(self.alphabet)
        return tuple(tuple(y for y in range(n) if self.follows(x, y)) for x in range(n))

    # -- normal forms -----------------------------------------------------

    def geodesic_form(self, w) -> Word:
        raise NotImplementedError

    def cyclic_form(self, w) -> Word:
        """A conjugacy geodesic conjugate to ``w``."""
        raise NotImplementedError

    def multiply(self, u, v) -> Word:
        return self.geodesic_form(tuple(u) + tuple(v))

    def inverse(self, w) -> Word:
        return self.alphabet.invert(w)

    def length(self, w) -> int:
        return len(self.geodesic_form(w))

    def is_geodesic(self, w) -> bool:
        f = self.follows
        return all(f(w[i], w[i + 1]) for i in range(len(w) - 1))

    def is_conj_geodesic(self, w) -> bool:
        return self.is_geodesic(w) and (len(w) < 2 or self.follows(w[-1], w[0]))

    def conj_key(self, w) -> Word:
        """Canonical representative of the conjugacy class of ``w``."""
        c = self.cyclic_form(w)
        return c if len(c) < 2 else lex_min_rotation(c)

    def conj_length(self, w) -> int:
        return len(self.cyclic_form(w))

    def has_finite_order(self, w) -> bool:
        raise NotImplementedError

    def primitive_root(self, w) -> tuple:
        """``(root, exponent)`` with ``root**exponent`` conjugate to ``w`` and
        ``root`` not a proper power."""
        if self.has_finite_order(w):
            raise TorsionInput(f"{self.alphabet.format(w)!r} has finite order in {self.descriptor}")
        key = self.conj_key(w)
        p = smallest_period(key)
        return key[:p], len(key) // p

    def is_primitive(self, w) -> bool:
        if self.has_finite_order(w):
            return False
        return self.primitive_root(w)[1] == 1

    def comm_key(self, w):
        if self.has_finite_order(w):
            return TORSION
        root, _ = self.primitive_root(w)
        return min(self.conj_key(root), self.conj_key(self.inverse(root)))

    def power(self, w, k: int) -> Word:
        if k < 0:
            w, k = self.inverse(w), -k
        out = EMPTY
        for _ in range(k):
            out = self.multiply(out, w)
        return out

    # -- enumeration ------------------------------------------------------

    def sphere_size(self, n: int) -> int:
        """Number of elements of length exactly ``n`` (counted, not enumerated)."""
        letters = range(len(self.alphabet))
        if n == 0:
            return 1
        ends = dict.fromkeys(letters, 1)
        for _ in range(n - 1):
            new = dict.fromkeys(letters, 0)
            for x, c in ends.items():
                for y in self.successors[x]:
                    new[y] += c
            ends = new
        return sum(ends.values())

    def _default_cap(self) -> int:
        n = 0
        while n < 512 and self.sphere_size(n + 1) <= MAX_SPHERE_SIZE:
            n += 1
        return n

    def enumerate_sphere(self, n: int, first: int | None = None) -> Iterator[Word]:
        """Geodesic normal forms of length exactly ``n``, in lex order.

        ``first`` restricts to one first-letter shard.
        """
        if n < 0:
            raise ValueError("n must be non-negative")
        if n > self.enum_cap:
            raise ResourceCap(f"sphere radius {n} exceeds enumeration cap {self.enum_cap} "
                              f"for {self.descriptor}")
        if n == 0:
            if first is None:
                yield EMPTY
            return
        succ = self.successors
        starts = range(len(self.alphabet)) if first is None else (first,)
        for a in starts:
            word = [a]
            # explicit stack of successor iterators keeps this allocation-light
            stack = [iter(succ[a])]
            if n == 1:
                yield (a,)
                continue
            while stack:
                nxt = next(stack[-1], None)
                if nxt is None:
                    stack.pop()
                    word.pop()
                    continue
                word.append(nxt)
                if len(word) == n:
                    yield tuple(word)
                    word.pop()
                else:
                    stack.append(iter(succ[nxt]))

    def ball(self, radius: int) -> list:
        """All elements of length at most ``radius``, shortlex order."""
        out = []
        for k in range(radius + 1):
            out.extend(self.enumerate_sphere(k))
        return out

    # -- automata ---------------------------------------------------------

    def geodesic_dfa(self) -> Dfa:
        """Minimal DFA of the geodesic normal forms."""
        follows = self.follows

        def step(last, y):
            return y if last == "start" or follows(last, y) else None
        return Dfa.explore(range(len(self.alphabet)), "start", step,
                           lambda k: True).minimize()

    def conj_geodesic_dfa(self) -> Dfa:
        """Minimal DFA of conjugacy geodesics: geodesic words whose first
        letter may also follow the last one (any word of length <= 1)."""
        follows = self.follows

        def step(k, y):
            if not k:
                return (y, y, True)
            first, last, _ = k
            return (first, y, False) if follows(last, y) else None

        def accept(k):
            return not k or k[2] or follows(k[1], k[0])
        return Dfa.explore(range(len(self.alphabet)), (), step, accept).minimize()


class FreeGroup(GroupModel):
    max_finite_order = 1

    def __init__(self, rank: int, enum_cap: int | None = None):
        if rank < 1:
            raise ValueError("rank must be at least 1")
        self.rank = rank
        self.alphabet = free_alphabet(rank)
        self.descriptor = f"free:{rank}"
        super().__init__(enum_cap)

    def follows(self, x, y):
        return self.alphabet.inverse[x] != y

    def geodesic_form(self, w):
        return free_reduce(w, self.alphabet.inverse)

    def cyclic_form(self, w):
        return cyclic_reduce(w, self.alphabet.inverse)

    def has_finite_order(self, w):
        return not self.cyclic_form(w)


class FreeProductCyclic(GroupModel):
    """``Z/m * Z/n`` generated by all nontrivial elements of both factors.

    Letter ``(f, e)`` is the ``e``-th power of the factor-``f`` generator;
    geodesic length equals syllable length.
    """

    def __init__(self, m: int, n: int, enum_cap: int | None = None):
        if m < 2 or n < 2:
            raise ValueError("factor orders must be at least 2")
        self.orders = (m, n)
        self.max_finite_order = max(m, n)
        self.descriptor = f"zm*zn:{m},{n}"
        self.letters = [(0, e) for e in range(1, m)] + [(1, e) for e in range(1, n)]
        self._letter_index = {fe: i for i, fe in enumerate(self.letters)}
        tokens = []
        for f, e in self.letters:
            base = "ab"[f]
            order = self.orders[f]
            if e == 1:
                tokens.append(base)
            elif e == order - 1:
                tokens.append(base.upper())
            else:
                tokens.append(f"{base}{e}")
        inverse = [self._letter_index[(f, (self.orders[f] - e) % self.orders[f])]
                   for f, e in self.letters]
        self.alphabet = Alphabet(tuple(tokens), tuple(inverse))
        self.factor = tuple(f for f, _ in self.letters)
        super().__init__(enum_cap)

    def follows(self, x, y):
        return self.factor[x] != self.factor[y]

    def _combine(self, x, y):
        """Letter for the in-factor product ``xy``, or None if trivial."""
        f, e1 = self.letters[x]
        e = (e1 + self.letters[y][1]) % self.orders[f]
        return self._letter_index[(f, e)] if e else None

    def geodesic_form(self, w):
        out: list = []
        factor = self.factor
        for x in w:
            if out and factor[out[-1]] == factor[x]:
                c = self._combine(out.pop(), x)
                if c is not None:
                    out.append(c)
            else:
                out.append(x)
        return tuple(out)

    def cyclic_form(self, w):
        r = list(self.geodesic_form(w))
        factor = self.factor
        while len(r) >= 2 and factor[r[0]] == factor[r[-1]]:
            # conjugate by the first letter: x W y -> W (y x)
            c = self._combine(r[-1], r[0])
            r = r[1:-1] + ([c] if c is not None else [])
        return tuple(r)

    def has_finite_order(self, w):
        return len(self.cyclic_form(w)) <= 1


_DESCRIPTOR = re.compile(r"^\s*(?:free:(\d+)|zm\*zn:(\d+),(\d+))\s*$")


def parse_model(descriptor: str, enum_cap: int | None = None) -> GroupModel:
    """``"free:2"`` or ``"zm*zn:2,3"``."""
    m = _DESCRIPTOR.match(descriptor)
    if not m:
        raise ValueError(f"bad group descriptor {descriptor!r}; "
                         "expected 'free:<k>' or 'zm*zn:<m>,<n>'")
    if m.group(1):
        return FreeGroup(int(m.group(1)), enum_cap)
    return FreeProductCyclic(int(m.group(2)), int(m.group(3)), enum_cap)
