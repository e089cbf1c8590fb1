"""Exact growth tables: ball, conjugacy, primitive conjugacy and
commensurability counts, by enumeration or by closed formulas."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from math import gcd
from typing import Sequence

from .errors import FormulaUnavailable, NegativeDifference, ResourceCap
from .groups import TORSION, FreeGroup, GroupModel, parse_model

KINDS = ("ball", "conj", "pconj", "comm")
MODES = ("strict", "cumulative")
ENGINES = ("enumerate", "formula")

ENUM_CAP = 12
FORMULA_CAP = 30

#: Bumped whenever a counting algorithm changes; part of every cache key.
ENGINE_VERSION = "growth-1"


@dataclass(frozen=True)
class GrowthTable:
    group: str
    kind: str
    mode: str
    coeffs: tuple
    engine: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def n_max(self) -> int:
        return len(self.coeffs) - 1

    def strict(self) -> "GrowthTable":
        return self if self.mode == "strict" else convert_mode(self)

    def cumulative(self) -> "GrowthTable":
        return self if self.mode == "cumulative" else convert_mode(self)


def convert_mode(t: GrowthTable) -> GrowthTable:
    """Flip between strict and cumulative counts.

    Strict from cumulative by first differences, cumulative from strict by
    prefix sums, i.e. multiplication of the series by ``1 - z`` or its inverse.
    """
    if t.mode == "cumulative":
        out, prev = [], 0
        for c in t.coeffs:
            d = c - prev
            if d < 0:
                raise NegativeDifference(f"cumulative table for {t.group}/{t.kind} decreases")
            out.append(d)
            prev = c
        return replace(t, mode="strict", coeffs=tuple(out))
    out, acc = [], 0
    for c in t.coeffs:
        acc += c
        out.append(acc)
    return replace(t, mode="cumulative", coeffs=tuple(out))


# -- enumeration engine ---------------------------------------------------

def sphere_keys(model: GroupModel, kind: str, n: int, first: int | None = None) -> set:
    """Keys of the classes whose minimal length is exactly ``n`` that meet
    one first-letter shard of the sphere of radius ``n``."""
    keys: set = set()
    if n == 0:
        if first is None:
            e = ()
            if kind in ("conj", "ball"):
                keys.add(e)
            elif kind == "comm":
                keys.add(TORSION)
        return keys
    follows = model.follows
    for w in model.enumerate_sphere(n, first):
        if kind == "ball":
            keys.add(w)
            continue
        # a class has minimal length n only if it contains a conjugacy
        # geodesic of length n; others were counted at a smaller radius
        if n > 1 and not follows(w[-1], w[0]):
            continue
        if kind == "conj":
            keys.add(model.conj_key(w))
        elif model.has_finite_order(w):
            continue  # torsion classes: counted once, at radius 0
        elif kind == "pconj":
            root, e = model.primitive_root(w)
            if e == 1:
                keys.add(root)
        else:
            k = model.comm_key(w)
            if len(k) == n:
                keys.add(k)
    return keys


def _shard(args) -> set:
    descriptor, cap, kind, n, first = args
    return sphere_keys(parse_model(descriptor, cap), kind, n, first)


def _strict_by_enumeration(model: GroupModel, kind: str, n_max: int, workers: int) -> list:
    out = []
    letters = range(len(model.alphabet))
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for n in range(n_max + 1):
            if n == 0:
                out.append(len(sphere_keys(model, kind, 0)))
                continue
            jobs = [(model.descriptor, model.enum_cap, kind, n, x) for x in letters]
            if kind == "ball":
                # shards are disjoint for elements
                out.append(sum(len(s) for s in _run(pool, jobs, model)))
                continue
            merged: set = set()
            for s in _run(pool, jobs, model):
                merged |= s
            out.append(len(merged))
    finally:
        if pool is not None:
            pool.shutdown()
    return out


def _run(pool, jobs, model):
    if pool is None:
        return [sphere_keys(model, *job[2:]) for job in jobs]
    return list(pool.map(_shard, jobs))


# -- formula engine (free groups) -----------------------------------------

def _divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def _euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(n, k) == 1)


def _mobius(n: int) -> int:
    result, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    return -result if m > 1 else result


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def cyclically_reduced_counts(k: int, n_max: int) -> list:
    """``c(m)``: cyclically reduced words of length ``m`` in the free group of rank ``k``.

    ``c(m)`` is the trace of ``T^m`` where ``T`` is the letter transfer
    matrix of reduced words (``x`` may be followed by anything but ``x^-1``);
    ``c(0) = 1`` for the empty word.
    """
    model = FreeGroup(k, enum_cap=0)
    n = 2 * k
    t = [[1 if model.follows(x, y) else 0 for y in range(n)] for x in range(n)]
    out = [1]
    p = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(n_max):
        p = _mat_mul(p, t)
        out.append(sum(p[i][i] for i in range(n)))
    return out


def necklace_counts_free(k: int, n_max: int) -> list:
    """Strict conjugacy counts of the free group of rank ``k`` (Burnside over rotations)."""
    if k < 2:
        raise ValueError("rank must be at least 2")
    c = cyclically_reduced_counts(k, n_max)
    out = [1]
    for n in range(1, n_max + 1):
        total = sum(_euler_phi(d) * c[n // d] for d in _divisors(n))
        q, r = divmod(total, n)
        assert r == 0
        out.append(q)
    return out


def primitive_necklace_counts_free(k: int, n_max: int) -> list:
    """Strict primitive conjugacy counts: aperiodic necklaces (Moebius inversion)."""
    c = cyclically_reduced_counts(k, n_max)
    out = [0]
    for n in range(1, n_max + 1):
        total = sum(_mobius(d) * c[n // d] for d in _divisors(n))
        q, r = divmod(total, n)
        assert r == 0
        out.append(q)
    return out


def _strict_by_formula(model: GroupModel, kind: str, n_max: int) -> list:
    if not isinstance(model, FreeGroup) or model.rank < 2:
        raise FormulaUnavailable(f"no closed form for {model.descriptor}")
    k = model.rank
    if kind == "ball":
        return [1] + [2 * k * (2 * k - 1) ** (n - 1) for n in range(1, n_max + 1)]
    if kind == "conj":
        return necklace_counts_free(k, n_max)
    prim = primitive_necklace_counts_free(k, n_max)
    if kind == "pconj":
        return prim
    # no nontrivial element of a free group is conjugate to its inverse, so
    # each commensurability class holds exactly two primitive classes
    return [1] + [p // 2 for p in prim[1:]]


def count_growth(model: GroupModel, kind: str, n_max: int, engine: str = "enumerate",
                 mode: str = "cumulative", workers: int = 1,
                 enum_cap: int = ENUM_CAP, formula_cap: int = FORMULA_CAP) -> GrowthTable:
    """Growth table of one kind for ``0..n_max``."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if engine == "enumerate":
        if n_max > enum_cap:
            raise ResourceCap(f"n_max={n_max} exceeds the enumeration cap {enum_cap}")
        strict = _strict_by_enumeration(model, kind, n_max, workers)
    elif engine == "formula":
        if n_max > formula_cap:
            raise ResourceCap(f"n_max={n_max} exceeds the formula cap {formula_cap}")
        strict = _strict_by_formula(model, kind, n_max)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    t = GrowthTable(model.descriptor, kind, "strict", tuple(strict), engine)
    return t if mode == "strict" else convert_mode(t)


def ball_counts(model: GroupModel, n_max: int) -> list:
    """Cumulative ball sizes from the geodesic automaton.

    Free groups go through the rational generating function, free products
    through transfer-matrix counting; both are exact.
    """
    dfa = model.geodesic_dfa()
    if isinstance(model, FreeGroup):
        strict = dfa.rational_gf().series(n_max + 1)
    else:
        strict = dfa.count_per_length(n_max)
    out, acc = [], 0
    for c in strict:
        acc += c
        out.append(acc)
    return out


# -- commensurability structure ------------------------------------------

def primitive_classes_by_comm(model: GroupModel, max_len: int) -> dict:
    """Map each commensurability key of an infinite-order class with minimal
    length ``<= max_len`` to the set of primitive conjugacy keys it contains
    among conjugacy geodesics of length ``<= max_len``."""
    out: dict = {}
    for n in range(1, max_len + 1):
        for w in model.enumerate_sphere(n):
            if not model.is_conj_geodesic(w) or model.has_finite_order(w):
                continue
            root, e = model.primitive_root(w)
            if e != 1:
                continue
            out.setdefault(model.comm_key(w), set()).add(root)
    return out


def check_chain(tables: Sequence[GrowthTable], n_range: range) -> list:
    """Indices ``n`` where ``comm <= pconj <= conj`` fails (tables in that order).

    The torsion class (the whole ``n = 0`` entry of the comm table) holds no
    primitive class and is left out of the comparison.
    """
    comm, pconj, conj = (t.cumulative().coeffs for t in tables)
    return [n for n in n_range if not comm[n] - comm[0] <= pconj[n] <= conj[n]]
