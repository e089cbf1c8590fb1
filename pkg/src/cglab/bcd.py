"""Padded alphabets and the automata behind the Delta-map.

Everything here is instantiated with the subgroup equal to the whole group,
so the two base alphabets X and Y are both the model alphabet.  A padded
letter is a letter index, with the padding symbol ``PAD = len(alphabet)``;
padding stands for the identity and sorts after every real letter.

Pair words ``(U, V)`` are sequences of ``(x, y)`` tuples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvariantViolation, LengthMismatch, NotConjGeodesic, ResourceCap
from .fsa import (Dfa, Nfa, boolean_combine, intersect_preimages, lazy_difference,
                  lazy_intersect_preimages, lazy_project, morphism_preimage)
from .groups import GroupModel
from .words import Word

DEFAULT_K = 2
MAX_K = 4
MAX_BALL = 2000


@dataclass(frozen=True)
class PaddedAlphabet:
    """``X$ = X + {$}``, ``Y$ = Y + {$}``, pair symbols ``B`` and triples ``C``."""

    size: int  # number of real letters (same for X and Y)
    tokens: tuple = field(default=())

    @classmethod
    def for_model(cls, model: GroupModel) -> "PaddedAlphabet":
        return cls(len(model.alphabet), tuple(model.alphabet.tokens) + ("$",))

    @property
    def pad(self) -> int:
        return self.size

    @property
    def letters(self) -> tuple:
        """Padded letters in order; the padding symbol is last."""
        return tuple(range(self.size + 1))

    @cached_property
    def pairs(self) -> tuple:
        return tuple((x, y) for x in self.letters for y in self.letters)

    @cached_property
    def triples(self) -> tuple:
        L = self.letters
        return tuple((x, y, z) for x in L for y in L for z in L)

    def unpad(self, word: Iterable[int]) -> Word:
        pad = self.pad
        return tuple(x for x in word if x != pad)

    def unpad_map(self) -> dict:
        """The monoid morphism deleting padding, as a symbol-to-word map."""
        m = {x: (x,) for x in range(self.size)}
        m[self.pad] = ()
        return m

    def format(self, word: Iterable[int]) -> str:
        return "".join(self.tokens[x] for x in word) if all(
            len(t) == 1 for t in self.tokens) else ",".join(self.tokens[x] for x in word)

    def parse(self, text: str, alphabet) -> Word:
        """Parse a padded word where ``$`` is the padding symbol."""
        if "," in text or not alphabet.single_char:
            parts = [p.strip() for p in text.split(",") if p.strip()]
        else:
            parts = list(text.strip())
        return tuple(self.pad if p == "$" else alphabet.index(p) for p in parts)


def zip_pair(u: Sequence[int], v: Sequence[int]) -> tuple:
    if len(u) != len(v):
        raise LengthMismatch(f"padded words have lengths {len(u)} and {len(v)}")
    return tuple(zip(u, v))


class BcdConfig:
    """A model together with the fellow-travel constant ``K`` and its ball."""

    def __init__(self, model: GroupModel, K: int = DEFAULT_K, max_k: int = MAX_K):
        if K < 0:
            raise ValueError("K must be non-negative")
        if K > max_k:
            raise ResourceCap(f"K={K} exceeds the configured bound {max_k}")
        self.model = model
        self.K = K
        self.padded = PaddedAlphabet.for_model(model)
        size = sum(model.sphere_size(k) for k in range(K + 1))
        if size > MAX_BALL:
            raise ResourceCap(f"ball of radius {K} has {size} elements (cap {MAX_BALL})")
        self.ball = tuple(model.ball(K))

    def __repr__(self):
        return f"BcdConfig({self.model.descriptor!r}, K={self.K})"

    def letter_word(self, x: int) -> Word:
        return () if x == self.padded.pad else (x,)


def bcd_pair_check(cfg: BcdConfig, U: Sequence[int], V: Sequence[int]) -> bool:
    """Decide the K-synchronous BCD condition straight from its definition.

    Looks for ``g`` in the K-ball with ``gU = Vg`` and
    ``|V_j^-1 g U_j| <= K`` for every prefix length ``j``.
    """
    return bcd_witness(cfg, U, V) is not None


def bcd_witness(cfg: BcdConfig, U: Sequence[int], V: Sequence[int]):
    """The first conjugator in the ball (shortlex) witnessing the pair, or None."""
    if len(U) != len(V):
        raise LengthMismatch(f"padded words have lengths {len(U)} and {len(V)}")
    model, K = cfg.model, cfg.K
    u = cfg.padded.unpad(U)
    v = cfg.padded.unpad(V)
    for g in cfg.ball:
        if model.multiply(g, u) != model.multiply(v, g):
            continue
        ok = True
        for j in range(1, len(U)):
            uj = cfg.padded.unpad(U[:j])
            vj = cfg.padded.unpad(V[:j])
            if model.length(model.inverse(vj) + tuple(g) + uj) > K:
                ok = False
                break
        if ok:
            return g
    return None


def _transition_table(cfg: BcdConfig) -> list:
    """``tau[h][(x, y)]``: ball index of ``x^-1 h y`` or None if it leaves the ball."""
    model, K = cfg.model, cfg.K
    index = {g: i for i, g in enumerate(cfg.ball)}
    table = []
    for h in cfg.ball:
        row = {}
        for x, y in cfg.padded.pairs:
            t = model.geodesic_form(model.inverse(cfg.letter_word(x)) + h + cfg.letter_word(y))
            row[(x, y)] = index[t] if len(t) <= K else None
        table.append(row)
    return table


def build_bcd_nfa(cfg: BcdConfig) -> Nfa:
    """Union of the per-conjugator automata, one copy for each ball element.

    In copy ``g`` the state is a ball element ``h``; the copy starts and
    accepts at ``g`` and reads ``(x, y)`` as ``h -> x^-1 h y``.
    """
    tau = _transition_table(cfg)
    n = len(cfg.ball)
    delta = {}
    for g in range(n):
        for h in range(n):
            for sym, t in tau[h].items():
                if t is not None:
                    delta[((g, h), sym)] = frozenset([(g, t)])
    diag = frozenset((g, g) for g in range(n))
    return Nfa(cfg.padded.pairs, diag, diag, delta)


def build_bcd_automaton(cfg: BcdConfig) -> Dfa:
    """Minimal DFA over pair symbols accepting exactly the K-synchronous BCD pairs."""
    return build_bcd_nfa(cfg).determinize().minimize()


LEX_UNDECIDED, LEX_LESS, LEX_GREATER = 0, -1, 1


def build_lex_automaton(pa: PaddedAlphabet) -> Dfa:
    """Comparator accepting ``(V1, V2)`` with ``V1`` strictly lex-smaller.

    Kept unminimized so the three comparator states stay visible.
    """
    def step(state, sym):
        if state != LEX_UNDECIDED:
            return state
        a, b = sym
        return LEX_LESS if a < b else LEX_GREATER if a > b else LEX_UNDECIDED
    return Dfa.explore(pa.pairs, LEX_UNDECIDED, step, lambda s: s == LEX_LESS)


def build_S(cfg: BcdConfig, exclude: Iterable[Sequence[int]] = ()) -> Dfa:
    """Padded words whose unpadding is a conjugacy geodesic not in ``exclude``."""
    pa = cfg.padded
    geo = cfg.model.conj_geodesic_dfa()
    exclude = [tuple(w) for w in exclude]
    if exclude:
        geo = boolean_combine(geo, Dfa.from_words(geo.symbols, exclude), "difference").minimize()
    return morphism_preimage(geo, pa.unpad_map(), pa.letters).minimize()


@dataclass(frozen=True)
class DeltaMachine:
    """The minimal-partner language ``m2`` and the languages it is built from.

    ``m2``, ``t1``, ``t2`` and ``m2_variant`` are :class:`Dfa` objects when the
    build was materialized and :class:`LazyDfa` objects otherwise; both
    answer the same membership queries.
    """

    cfg: BcdConfig
    m2: object
    s: Dfa
    m: Dfa
    partners: Dfa
    t1: object
    t2: object
    m2_variant: object | None = None


#: Materialize the Delta machine by default only up to this K.
MATERIALIZE_MAX_K = 0


def build_delta(cfg: BcdConfig, variant_formula: bool = False,
                materialize: bool | None = None, max_states: int = 200_000,
                exclude: Iterable[Sequence[int]] = ()) -> DeltaMachine:
    """Build the language of pairs ``(U, V)`` where ``V`` is the lex-least
    padded geodesic partner of ``U``.

    ``m2 = (M & pi_2^-1(S)) - pi_13(T2)`` with ``T1`` the triples of common
    partners and ``T2`` those with ``V1 < V2``.  With ``variant_formula`` the
    variant ``pi_12(T2) - pi_13(T2)`` is built too; it drops every ``U``
    whose partner is unique.

    The triple-alphabet languages grow quickly with ``K`` (the pair
    automaton alone has thousands of states at ``K = 2`` in rank 2), so they
    are evaluated lazily; ``materialize`` (default: ``K = 0``) expands and
    minimizes the final machines.
    """
    pa = cfg.padded
    if materialize is None:
        materialize = cfg.K <= MATERIALIZE_MAX_K
    m = build_bcd_automaton(cfg)
    s = build_S(cfg, exclude)
    # minimized, the "greater" sink merges into the fail state and prunes T2
    lex = build_lex_automaton(pa).minimize()
    triples = pa.triples
    good = intersect_preimages(pa.pairs, [
        (m, lambda b: b),
        (s, lambda b: b[1]),
    ]).minimize()
    # T1 = pi12^-1(M) & pi13^-1(M) & pi2^-1(S) & pi3^-1(S), grouped as two
    # copies of the minimized pair language M & pi2^-1(S)
    t1 = lazy_intersect_preimages(triples, [
        (good, lambda c: (c[0], c[1])),
        (good, lambda c: (c[0], c[2])),
    ])
    t2 = lazy_intersect_preimages(triples, [
        (good, lambda c: (c[0], c[1])),
        (good, lambda c: (c[0], c[2])),
        (lex, lambda c: (c[1], c[2])),
    ])
    beaten = lazy_project(t2, (0, 2))
    m2 = lazy_difference(good, beaten)
    m2_variant = lazy_difference(lazy_project(t2, (0, 1)), beaten) if variant_formula else None
    if materialize:
        m2 = m2.materialize(max_states).minimize()
        if m2_variant is not None:
            m2_variant = m2_variant.materialize(max_states).minimize()
    return DeltaMachine(cfg, m2, s, m, good, t1, t2, m2_variant)


def partners(dm: DeltaMachine, U: Sequence[int], machine=None) -> list:
    """All padded ``V`` with ``(U, V)`` accepted by ``machine`` (default ``m2``), lex order.

    Both ``m2`` and the alternative formula lie inside ``dm.partners``, so
    candidates are enumerated through that small automaton first and only
    complete candidates are run through the (lazy) machine.
    """
    machine = dm.m2 if machine is None else machine
    good = dm.partners
    letters = dm.cfg.padded.letters
    U = tuple(U)
    candidates = []

    def rec(q, j, acc):
        if j == len(U):
            if q in good.accepting:
                candidates.append(tuple(acc))
            return
        for y in letters:
            t = good.delta(q, (U[j], y))
            if t in good.live:
                acc.append(y)
                rec(t, j + 1, acc)
                acc.pop()
    if good.start in good.live:
        rec(good.start, 0, [])
    if machine is good:
        return candidates
    return [V for V in candidates if machine.accepts(zip(U, V))]


def delta_apply(dm: DeltaMachine, U: Sequence[int]) -> tuple:
    """Image of a conjugacy geodesic ``U``.

    Returns ``(output_word, padded_partner, conjugator)`` where the
    conjugator ``g`` satisfies ``gU = Vg`` with the fellow-travel bound.
    """
    model = dm.cfg.model
    U = tuple(U)
    if not model.is_conj_geodesic(U):
        raise NotConjGeodesic(f"{model.alphabet.format(U)!r} is not minimal in its conjugacy class")
    found = partners(dm, U)
    if len(found) != 1:
        raise InvariantViolation(f"expected one partner for {model.alphabet.format(U)!r}, "
                                 f"found {len(found)}")
    V = found[0]
    g = bcd_witness(dm.cfg, U, V)
    if g is None:
        raise InvariantViolation("accepted partner has no witnessing conjugator")
    return dm.cfg.padded.unpad(V), V, g
