"""Finite automata over arbitrary hashable symbols.

:class:`Dfa` objects are immutable, have a total transition table and keep
an explicit fail state at index 0.  Most constructions go through
:meth:`Dfa.explore`, which builds the reachable part of an automaton from a
start key and a step function, so products, preimages and subset
constructions never materialize unreachable states.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as _iproduct
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from . import polys
from .errors import AlphabetMismatch, ResourceCap

FAIL = 0


@dataclass(frozen=True)
class Dfa:
    """Deterministic automaton with a total table.

    ``table[q][i]`` is the successor of state ``q`` on ``symbols[i]``.
    State 0 is the fail state: non-accepting and absorbing.
    """

    symbols: tuple
    table: tuple
    start: int
    accepting: frozenset
    _sym: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_sym", {s: i for i, s in enumerate(self.symbols)})
        if len(self._sym) != len(self.symbols):
            raise ValueError("duplicate symbols")
        if self.table and (FAIL in self.accepting or any(t != FAIL for t in self.table[FAIL])):
            raise ValueError("state 0 must be a non-accepting sink")

    # -- construction -----------------------------------------------------

    @classmethod
    def explore(cls, symbols: Sequence, start: Hashable,
                step: Callable, accept: Callable, max_states: int | None = None) -> "Dfa":
        """Build the reachable automaton from ``start``.

        ``step(key, symbol)`` returns the successor key or ``None`` for the
        fail state; ``accept(key)`` marks accepting keys.  States are
        numbered in BFS order from the start (start = 1), symbols scanned in
        the given order.  Raises :class:`ResourceCap` past ``max_states``.
        """
        symbols = tuple(symbols)
        if start is None:
            return cls.empty(symbols)
        ids = {start: 1}
        keys = [start]
        rows = [tuple([FAIL] * len(symbols))]
        queue = deque([start])
        while queue:
            key = queue.popleft()
            row = []
            for s in symbols:
                nxt = step(key, s)
                if nxt is None:
                    row.append(FAIL)
                    continue
                j = ids.get(nxt)
                if j is None:
                    if max_states is not None and len(keys) >= max_states:
                        raise ResourceCap(f"automaton exceeds {max_states} states")
                    j = ids[nxt] = len(keys) + 1
                    keys.append(nxt)
                    queue.append(nxt)
                row.append(j)
            rows.append(tuple(row))
        acc = frozenset(i + 1 for i, k in enumerate(keys) if accept(k))
        return cls(symbols, tuple(rows), 1, acc)

    @classmethod
    def empty(cls, symbols: Sequence) -> "Dfa":
        symbols = tuple(symbols)
        return cls(symbols, (tuple([FAIL] * len(symbols)),), FAIL, frozenset())

    @classmethod
    def universal(cls, symbols: Sequence) -> "Dfa":
        return cls.explore(symbols, "*", lambda k, s: "*", lambda k: True)

    @classmethod
    def from_words(cls, symbols: Sequence, words: Iterable) -> "Dfa":
        """Trie automaton accepting exactly the given finite set of words."""
        words = [tuple(w) for w in words]
        prefixes = {w[:i] for w in words for i in range(len(w) + 1)}
        final = set(words)
        if not prefixes:
            return cls.empty(symbols)

        def step(k, s):
            n = k + (s,)
            return n if n in prefixes else None
        return cls.explore(symbols, (), step, final.__contains__)

    # -- basic queries ----------------------------------------------------

    @property
    def n_states(self) -> int:
        return len(self.table)

    def index(self, symbol) -> int:
        return self._sym[symbol]

    def delta(self, state: int, symbol) -> int:
        return self.table[state][self._sym[symbol]]

    def run(self, word: Iterable, state: int | None = None) -> int:
        q = self.start if state is None else state
        table, sym = self.table, self._sym
        for s in word:
            q = table[q][sym[s]]
            if q == FAIL:
                return FAIL
        return q

    def accepts(self, word: Iterable) -> bool:
        return self.run(word) in self.accepting

    __contains__ = accepts

    @cached_property
    def live(self) -> frozenset:
        """States from which some accepting state is reachable."""
        back: dict = {}
        for q, row in enumerate(self.table):
            for t in row:
                back.setdefault(t, set()).add(q)
        seen = set(self.accepting)
        stack = list(self.accepting)
        while stack:
            q = stack.pop()
            for p in back.get(q, ()):
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return frozenset(seen)

    def as_lazy(self) -> "LazyDfa":
        """View with ``None`` for the fail state and all dead states."""
        live, table, sym = self.live, self.table, self._sym

        def step(q, s):
            t = table[q][sym[s]]
            return t if t in live else None
        start = self.start if self.start in live else None
        return LazyDfa(self.symbols, start, step, self.accepting.__contains__)

    def is_empty(self) -> bool:
        return self.start not in self.live

    def words(self, length: int):
        """Accepted words of the given length, in symbol order."""
        live = self.live
        if self.start not in live:
            return

        def rec(q, prefix, left):
            if left == 0:
                if q in self.accepting:
                    yield tuple(prefix)
                return
            for i, t in enumerate(self.table[q]):
                if t in live:
                    prefix.append(self.symbols[i])
                    yield from rec(t, prefix, left - 1)
                    prefix.pop()
        yield from rec(self.start, [], length)

    # -- transformations --------------------------------------------------

    def minimize(self) -> "Dfa":
        """Minimal equivalent automaton in canonical BFS numbering.

        Moore partition refinement on the reachable states; dead states are
        merged into the fail state first.
        """
        live = self.live
        if self.start not in live:
            return Dfa.empty(self.symbols)
        reach = _reachable(self)
        states = [q for q in reach if q in live]
        table = self.table
        cls_of = {q: (1 if q in self.accepting else 2) for q in states}
        n_classes = len(set(cls_of.values()))
        while True:
            sigs: dict = {}
            new = {}
            for q in states:
                sig = (cls_of[q],) + tuple(cls_of.get(t, 0) for t in table[q])
                new[q] = sigs.setdefault(sig, len(sigs) + 1)
            if len(sigs) == n_classes:
                break
            cls_of, n_classes = new, len(sigs)
        rep = {}
        for q in states:
            rep.setdefault(cls_of[q], q)

        sym = self._sym

        def step(c, s):
            return cls_of.get(table[rep[c]][sym[s]])
        return Dfa.explore(self.symbols, cls_of[self.start], step,
                           lambda c: rep[c] in self.accepting)

    def complement(self) -> "Dfa":
        table, sym = self.table, self._sym
        # the old fail state becomes an ordinary accepting sink
        return Dfa.explore(self.symbols, self.start,
                           lambda q, s: table[q][sym[s]],
                           lambda q: q not in self.accepting).minimize()

    def count_per_length(self, n_max: int) -> list:
        """Exact number of accepted words of each length ``0..n_max``."""
        vec = {self.start: 1} if self.start != FAIL else {}
        out = []
        acc = self.accepting
        table = self.table
        for n in range(n_max + 1):
            out.append(sum(c for q, c in vec.items() if q in acc))
            if n == n_max:
                break
            nxt: dict = {}
            for q, c in vec.items():
                for t in table[q]:
                    if t != FAIL:
                        nxt[t] = nxt.get(t, 0) + c
            vec = nxt
        return out

    def rational_gf(self) -> "RationalGF":
        """Growth series ``u (I - zT)^-1 v`` as a reduced ratio of integer polynomials."""
        live = self.live
        if self.start not in live:
            return RationalGF(polys.ZERO, polys.ONE)
        states = sorted(q for q in _reachable(self) if q in live)
        pos = {q: i for i, q in enumerate(states)}
        n = len(states)
        # A = I - zT over the trimmed states
        a = [[polys.ZERO] * n for _ in range(n)]
        for q in states:
            i = pos[q]
            counts: dict = {}
            for t in self.table[q]:
                if t in pos:
                    counts[pos[t]] = counts.get(pos[t], 0) + 1
            a[i][i] = polys.ONE
            for j, c in counts.items():
                a[i][j] = polys.add(a[i][j], (0, -c))
        den = polys.bareiss_det(a)
        # Cramer: x = A^-1 v, series = x[start]
        s = pos[self.start]
        cram = [row[:] for row in a]
        for q in states:
            cram[pos[q]][s] = polys.ONE if q in self.accepting else polys.ZERO
        num = polys.bareiss_det(cram)
        return RationalGF(num, den).reduced()

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        d = {
            "schema": 1,
            "symbols": [_sym_json(s) for s in self.symbols],
            "states": self.n_states,
            "start": self.start,
            "accepting": sorted(self.accepting),
            "transitions": [list(r) for r in self.table],
        }
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Dfa":
        d = json.loads(text)
        syms = tuple(tuple(s) if isinstance(s, list) else s for s in d["symbols"])
        return cls(syms, tuple(tuple(r) for r in d["transitions"]), d["start"],
                   frozenset(d["accepting"]))

    def to_dot(self, label: Callable | None = None, name: str = "dfa") -> str:
        """Graphviz source, one line per transition; the fail state is omitted."""
        label = label or _sym_label
        lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point];']
        for q in range(1, self.n_states):
            shape = "doublecircle" if q in self.accepting else "circle"
            lines.append(f"  {q} [shape={shape}];")
        if self.start != FAIL:
            lines.append(f"  __start -> {self.start};")
        for q in range(1, self.n_states):
            for i, t in enumerate(self.table[q]):
                if t != FAIL:
                    lab = label(self.symbols[i]).replace('"', '\\"')
                    lines.append(f'  {q} -> {t} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _sym_json(s):
    return list(s) if isinstance(s, tuple) else s


def _sym_label(s) -> str:
    if isinstance(s, tuple):
        return "(" + ",".join(str(x) for x in s) + ")"
    return str(s)


def _reachable(d: Dfa) -> list:
    seen = {d.start}
    order = [d.start]
    for q in order:
        for t in d.table[q]:
            if t not in seen:
                seen.add(t)
                order.append(t)
    return order


@dataclass(frozen=True)
class RationalGF:
    """``numerator / denominator`` with integer coefficients, constant term first."""

    numerator: tuple
    denominator: tuple

    def reduced(self) -> "RationalGF":
        num, den = self.numerator, self.denominator
        if not num:
            return RationalGF(polys.ZERO, polys.ONE)
        g = polys.poly_gcd(num, den)
        if polys.degree(g) > 0 or abs(g[0]) != 1:
            num, den = polys.divmod_exact(num, g), polys.divmod_exact(den, g)
        if den[0] < 0:
            num, den = polys.neg(num), polys.neg(den)
        return RationalGF(num, den)

    def series(self, n_terms: int) -> list:
        return polys.series(self.numerator, self.denominator, n_terms)

    def __str__(self):
        return f"({polys.format_poly(self.numerator)}) / ({polys.format_poly(self.denominator)})"


@dataclass(frozen=True)
class Nfa:
    """Epsilon-free nondeterministic automaton.

    ``delta`` maps ``(state, symbol)`` to a frozenset of states; missing
    keys mean no move.  States are arbitrary hashables.
    """

    symbols: tuple
    starts: frozenset
    accepting: frozenset
    delta: Mapping

    def accepts(self, word: Iterable) -> bool:
        cur = set(self.starts)
        for s in word:
            cur = {t for q in cur for t in self.delta.get((q, s), ())}
            if not cur:
                return False
        return bool(cur & self.accepting)

    def determinize(self) -> Dfa:
        succ: dict = {}
        for (q, s), ts in self.delta.items():
            succ.setdefault(q, {}).setdefault(s, set()).update(ts)
        acc = self.accepting

        def step(subset, s):
            out = set()
            for q in subset:
                out.update(succ.get(q, {}).get(s, ()))
            return frozenset(out) if out else None
        start = self.starts if self.starts else None
        return Dfa.explore(self.symbols, start, step, lambda k: not acc.isdisjoint(k))


def boolean_combine(a: Dfa, b: Dfa, op: str) -> Dfa:
    """Product automaton for ``union``, ``intersection`` or ``difference``."""
    if a.symbols != b.symbols:
        if set(a.symbols) != set(b.symbols):
            raise AlphabetMismatch("automata have different symbol alphabets")
    rule = {
        "union": lambda x, y: x or y,
        "intersection": lambda x, y: x and y,
        "difference": lambda x, y: x and not y,
    }.get(op)
    if rule is None:
        raise ValueError(f"unknown operation {op!r}")
    drop_a = op in ("intersection", "difference")
    drop_b = op == "intersection"

    def step(k, s):
        p, q = k
        p2, q2 = a.delta(p, s), b.delta(q, s)
        if (p2 == FAIL and drop_a) or (q2 == FAIL and drop_b) or (p2 == FAIL and q2 == FAIL):
            return None
        return (p2, q2)
    start = (a.start, b.start)
    return Dfa.explore(a.symbols, start, step,
                       lambda k: rule(k[0] in a.accepting, k[1] in b.accepting))


def intersect_preimages(symbols: Sequence, parts: Sequence) -> Dfa:
    """Intersection of preimages ``phi_i^-1(L(d_i))`` for ``parts = [(d_i, phi_i)]``.

    ``phi_i`` maps a symbol of ``symbols`` to one symbol of ``d_i``.  This is
    the lazily explored product of :func:`morphism_preimage` results and
    :func:`boolean_combine` intersections.
    """
    parts = list(parts)
    symbols = tuple(symbols)
    idx = []
    for d, phi in parts:
        idx.append({s: d.index(phi(s)) for s in symbols})
    tables = [d.table for d, _ in parts]

    def step(k, s):
        out = []
        for q, t, ix in zip(k, tables, idx):
            r = t[q][ix[s]]
            if r == FAIL:
                return None
            out.append(r)
        return tuple(out)
    start = tuple(d.start for d, _ in parts)
    if FAIL in start:
        return Dfa.empty(symbols)
    accs = [d.accepting for d, _ in parts]
    return Dfa.explore(symbols, start, step,
                       lambda k: all(q in acc for q, acc in zip(k, accs)))


def morphism_preimage(a: Dfa, phi: Mapping, source_symbols: Sequence) -> Dfa:
    """Automaton for ``{w : phi(w) in L(a)}``; ``phi`` maps symbols to tuples."""
    images = {s: tuple(phi[s]) for s in source_symbols}

    def step(q, s):
        r = a.run(images[s], q)
        return None if r == FAIL else r
    start = None if a.start == FAIL else a.start
    return Dfa.explore(source_symbols, start, step, a.accepting.__contains__)


def morphism_image(a: Dfa, phi: Mapping, target_symbols: Sequence) -> Nfa:
    """Epsilon-free automaton for ``{phi(w) : w in L(a)}``.

    Multi-letter images expand through intermediate states; erased symbols
    are folded away with a closure computed here, once.
    """
    live = a.live
    erasing = [i for i, s in enumerate(a.symbols) if len(phi[s]) == 0]
    closure = {}
    for q in live:
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for i in erasing:
                t = a.table[p][i]
                if t in live and t not in seen:
                    seen.add(t)
                    stack.append(t)
        closure[q] = seen
    delta: dict = {}

    def add(src, sym, dst):
        delta.setdefault((src, sym), set()).add(dst)

    for q in live:
        for p in closure[q]:
            for i, s in enumerate(a.symbols):
                t = a.table[p][i]
                img = tuple(phi[s])
                if t not in live or not img:
                    continue
                prev = q
                for k, letter in enumerate(img[:-1]):
                    mid = ("mid", p, i, k)
                    add(prev, letter, mid)
                    prev = mid
                add(prev, img[-1], t)
    acc = frozenset(q for q in live if closure[q] & a.accepting)
    starts = frozenset([a.start]) if a.start in live else frozenset()
    return Nfa(tuple(target_symbols), starts, acc,
               {k: frozenset(v) for k, v in delta.items()})


def project(a: Dfa, coords: Sequence[int]) -> Dfa:
    """Image of a tuple-symbol language under coordinate projection, minimized."""
    coords = tuple(coords)

    def proj(s):
        return s[coords[0]] if len(coords) == 1 else tuple(s[c] for c in coords)
    targets = []
    for s in a.symbols:
        t = proj(s)
        if t not in targets:
            targets.append(t)
    return project_to(a, proj, targets)


def project_to(a: Dfa, proj: Callable, target_symbols: Sequence) -> Dfa:
    """Letter-to-letter image determinized directly by subset construction."""
    live = a.live
    succ: dict = {}
    for q in live:
        row = succ.setdefault(q, {})
        for i, s in enumerate(a.symbols):
            t = a.table[q][i]
            if t in live:
                row.setdefault(proj(s), set()).add(t)
    acc = a.accepting

    def step(subset, s):
        out = set()
        for q in subset:
            out.update(succ[q].get(s, ()))
        return frozenset(out) if out else None
    start = frozenset([a.start]) if a.start in live else None
    return Dfa.explore(tuple(target_symbols), start, step,
                       lambda k: not acc.isdisjoint(k)).minimize()


def tuple_symbols(*alphabets: Sequence) -> tuple:
    """Product alphabet, ordered lexicographically by coordinate."""
    return tuple(_iproduct(*alphabets))


class LazyDfa:
    """Deterministic automaton whose transitions are computed on demand.

    States are arbitrary hashable keys and ``None`` is the fail state.
    Transitions are memoized, so repeated queries are cheap; the reachable
    part can be turned into a :class:`Dfa` with :meth:`materialize`.
    """

    def __init__(self, symbols: Sequence, start, step: Callable, accept: Callable):
        self.symbols = tuple(symbols)
        self.start = start
        self._step = step
        self._accept = accept
        self._cache: dict = {}

    def delta(self, key, symbol):
        if key is None:
            return None
        k = (key, symbol)
        try:
            return self._cache[k]
        except KeyError:
            t = self._cache[k] = self._step(key, symbol)
            return t

    def is_accepting(self, key) -> bool:
        return key is not None and self._accept(key)

    def run(self, word: Iterable, state=None):
        q = self.start if state is None else state
        for s in word:
            q = self.delta(q, s)
            if q is None:
                return None
        return q

    def accepts(self, word: Iterable) -> bool:
        return self.is_accepting(self.run(word))

    __contains__ = accepts

    def as_lazy(self) -> "LazyDfa":
        return self

    def materialize(self, max_states: int | None = None) -> Dfa:
        return Dfa.explore(self.symbols, self.start, self.delta, self._accept,
                           max_states=max_states)


def lazy_intersect_preimages(symbols: Sequence, parts: Sequence) -> LazyDfa:
    """Lazy counterpart of :func:`intersect_preimages`; parts may be lazy.

    Concrete :class:`Dfa` parts are stepped through their tables directly,
    with their fail state read as ``None``.
    """
    symbols = tuple(symbols)
    steppers, accepts, start = [], [], []
    for d, phi in parts:
        if isinstance(d, Dfa):
            cols = {s: d.index(phi(s)) for s in symbols}
            table = d.table
            steppers.append(lambda q, s, t=table, c=cols: t[q][c[s]] or None)
            accepts.append(d.accepting.__contains__)
            start.append(d.start or None)
        else:
            lazy = d.as_lazy()
            img = {s: phi(s) for s in symbols}
            steppers.append(lambda q, s, a=lazy, i=img: a.delta(q, i[s]))
            accepts.append(lazy.is_accepting)
            start.append(lazy.start)

    def step(k, s):
        out = []
        for q, f in zip(k, steppers):
            r = f(q, s)
            if r is None:
                return None
            out.append(r)
        return tuple(out)
    start = None if any(q is None for q in start) else tuple(start)
    return LazyDfa(symbols, start, step,
                   lambda k: all(acc(q) for acc, q in zip(accepts, k)))


def lazy_project(a, coords: Sequence[int]) -> LazyDfa:
    """Subset construction for a coordinate projection, evaluated on demand."""
    a = a.as_lazy()
    coords = tuple(coords)
    groups: dict = {}
    for s in a.symbols:
        t = s[coords[0]] if len(coords) == 1 else tuple(s[c] for c in coords)
        groups.setdefault(t, []).append(s)

    # successors of one state under one projected letter, shared by all subsets
    image: dict = {}

    def successors(q, t):
        try:
            return image[q, t]
        except KeyError:
            out = image[q, t] = tuple(r for r in (a.delta(q, s) for s in groups[t])
                                      if r is not None)
            return out

    def step(subset, t):
        out = set()
        for q in subset:
            out.update(successors(q, t))
        return frozenset(out) if out else None
    start = frozenset([a.start]) if a.start is not None else None
    return LazyDfa(tuple(groups), start, step,
                   lambda k: any(a.is_accepting(q) for q in k))


def lazy_difference(a, b) -> LazyDfa:
    """``L(a) - L(b)``; both arguments may be lazy."""
    a, b = a.as_lazy(), b.as_lazy()

    def step(k, s):
        p, q = k
        p2 = a.delta(p, s)
        if p2 is None:
            return None
        return (p2, b.delta(q, s))
    start = None if a.start is None else (a.start, b.start)
    return LazyDfa(a.symbols, start, step,
                   lambda k: a.is_accepting(k[0]) and not b.is_accepting(k[1]))
