"""Diagnostics on integer coefficient sequences.

Recurrence detection is exact (``fractions.Fraction`` linear algebra); the
growth-rate and exponent fits are floating point and report residuals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InsufficientData, RangeError
from .growth import GrowthTable


@dataclass(frozen=True)
class RecurrenceReport:
    """Outcome of a search for ``c[n+d] = sum_i coeffs[i-1] * c[n+d-i]``, valid for ``n >= offset``."""

    found: bool
    max_order: int
    n_terms: int
    order: int = 0
    coeffs: tuple = ()
    offset: int = 0
    window: tuple = (0, 0)
    verified_through: int = -1

    def predict(self, seq: Sequence[int], n_terms: int) -> list:
        """Extend ``seq`` to ``n_terms`` terms using the recurrence."""
        out = list(seq)
        d = self.order
        while len(out) < n_terms:
            n = len(out)
            out.append(sum(self.coeffs[i] * out[n - 1 - i] for i in range(d)))
        return [int(x) if Fraction(x).denominator == 1 else x for x in out]

    def characteristic_polynomial(self) -> list:
        """Coefficients of ``x^d - a_1 x^(d-1) - ... - a_d``, highest degree first."""
        return [Fraction(1)] + [-Fraction(a) for a in self.coeffs]

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "max_order": self.max_order,
            "n_terms": self.n_terms,
            "order": self.order,
            "coeffs": [str(Fraction(c)) for c in self.coeffs],
            "offset": self.offset,
            "window": list(self.window),
            "verified_through": self.verified_through,
        }


def _solve(rows: list, rhs: list):
    """One exact solution of a square system (free unknowns set to 0), or None."""
    n = len(rows)
    m = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, n) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if m[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = m[i][n]
    return x


def find_recurrence(coeffs: Sequence[int], max_order: int = 8,
                    max_offset: int | None = None) -> RecurrenceReport:
    """Smallest-order constant-coefficient recurrence fitting all terms.

    For each order ``d`` and start offset ``s`` the recurrence is solved
    from the ``2d`` terms starting at ``s`` and then checked against every
    later term; at least ``d`` terms beyond the fitting window must remain
    for checking.  Offsets run up to ``max_offset`` (default ``max_order``).
    """
    c = [int(x) for x in coeffs]
    if max_order < 1:
        raise ValueError("max_order must be positive")
    if len(c) < 3 * max_order:
        raise InsufficientData(f"need {3 * max_order} terms for order {max_order}, got {len(c)}")
    if max_offset is None:
        max_offset = max_order
    for d in range(1, max_order + 1):
        for s in range(0, min(max_offset, len(c) - 3 * d) + 1):
            rows = [[c[n + d - i] for i in range(1, d + 1)] for n in range(s, s + d)]
            rhs = [c[n + d] for n in range(s, s + d)]
            sol = _solve(rows, rhs)
            if sol is None:
                continue
            if all(sum(sol[i - 1] * c[n + d - i] for i in range(1, d + 1)) == c[n + d]
                   for n in range(s, len(c) - d)):
                return RecurrenceReport(True, max_order, len(c), d, tuple(sol), s,
                                        (s, s + 2 * d - 1), len(c) - 1)
    return RecurrenceReport(False, max_order, len(c))


def hankel_rank(coeffs: Sequence[int], size: int, start: int = 0) -> int:
    """Exact rank of the ``size x size`` Hankel matrix ``[c[start+i+j]]``."""
    m = [[Fraction(coeffs[start + i + j]) for j in range(size)] for i in range(size)]
    rank = 0
    for col in range(size):
        p = next((i for i in range(rank, size) if m[i][col] != 0), None)
        if p is None:
            continue
        m[rank], m[p] = m[p], m[rank]
        for i in range(rank + 1, size):
            f = m[i][col] / m[rank][col]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def dominant_root(report: RecurrenceReport):
    """Largest-modulus root of the characteristic polynomial; exact when rational."""
    poly = report.characteristic_polynomial()
    roots = np.roots([float(a) for a in poly])
    if len(roots) == 0:
        return Fraction(0)
    r = max(roots, key=abs)
    approx = Fraction(float(abs(r))).limit_denominator(1000)
    if _peval(poly, approx) == 0:
        return approx
    return float(abs(r))


def _peval(poly, x):
    acc = Fraction(0)
    for a in poly:
        acc = acc * x + a
    return acc


def growth_rate(coeffs: Sequence[int], max_order: int = 8):
    """Estimate the exponential growth base ``e^h`` of a sequence.

    Rational inputs (a recurrence is found) get the exact dominant root;
    otherwise the ratios ``c[n]/c[n-1]`` are extrapolated linearly in ``1/n``.
    """
    c = [int(x) for x in coeffs]
    if len(c) < 4:
        raise InsufficientData("need at least 4 terms")
    order = min(max_order, len(c) // 3)
    rep = find_recurrence(c, order)
    if rep.found:
        return dominant_root(rep)
    pts = [(n, c[n] / c[n - 1]) for n in range(1, len(c)) if c[n - 1] > 0 and c[n] > 0]
    pts = pts[len(pts) // 2:]
    if len(pts) < 2:
        raise InsufficientData("not enough positive terms")
    x = np.array([1.0 / n for n, _ in pts])
    y = np.array([r for _, r in pts])
    slope, intercept = np.polyfit(x, y, 1)
    return float(intercept)


@dataclass(frozen=True)
class BandCheckReport:
    """``r_n = c(n) * n / e_h**n`` over a range of ``n``."""

    n_range: tuple
    values: tuple = field(repr=False)
    min: float = 0.0
    max: float = 0.0
    ratio: float = 0.0

    def to_dict(self) -> dict:
        return {"range": list(self.n_range), "values": [_fmt(v) for v in self.values],
                "min": _fmt(self.min), "max": _fmt(self.max), "ratio": _fmt(self.ratio)}


def band_check(table: GrowthTable, e_h, n_range: Sequence[int]) -> BandCheckReport:
    lo, hi = n_range[0], n_range[-1]
    if lo < 1 or hi > table.n_max or lo > hi:
        raise RangeError(f"range [{lo}, {hi}] outside table 1..{table.n_max}")
    base = Fraction(e_h) if isinstance(e_h, (int, Fraction)) else None
    vals = []
    for n in range(lo, hi + 1):
        if base is not None:
            vals.append(float(Fraction(table.coeffs[n] * n) / base ** n))
        else:
            vals.append(math.exp(math.log(table.coeffs[n] * n) - n * math.log(e_h))
                        if table.coeffs[n] > 0 else 0.0)
    mn, mx = min(vals), max(vals)
    return BandCheckReport((lo, hi), tuple(vals), mn, mx, mx / mn if mn > 0 else math.inf)


@dataclass(frozen=True)
class AsymptoticFit:
    """Fit of ``log(b_n / base**n) ~ log A + p log n``."""

    base: float
    p: float
    log_a: float
    residual: float
    n_range: tuple

    def to_dict(self) -> dict:
        return {"base": _fmt(self.base), "p": _fmt(self.p), "log_a": _fmt(self.log_a),
                "residual": _fmt(self.residual), "range": list(self.n_range)}


def exponent_fit(coeffs: Sequence[int], base, n_range: Sequence[int] | None = None) -> AsymptoticFit:
    """Least-squares polynomial exponent ``p`` in ``b_n ~ A n^p base^n``.

    ``residual`` is the root-mean-square deviation of the fitted line.
    """
    lam = float(base)
    if lam <= 1:
        raise ValueError("base must exceed 1")
    c = [int(x) for x in coeffs]
    if n_range is None:
        n_range = (len(c) // 2, len(c) - 1)
    lo, hi = n_range[0], n_range[-1]
    if lo < 1 or hi >= len(c):
        raise RangeError(f"range [{lo}, {hi}] outside 1..{len(c) - 1}")
    ns = [n for n in range(lo, hi + 1) if c[n] > 0]
    if len(ns) < 8:
        raise InsufficientData("need at least 8 positive terms in the fit range")
    x = np.log(np.array(ns, dtype=float))
    # log of big ints without overflowing floats
    y = np.array([_log_int(c[n]) - n * math.log(lam) for n in ns])
    p, log_a = np.polyfit(x, y, 1)
    resid = y - (p * x + log_a)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return AsymptoticFit(lam, float(p), float(log_a), rms, (lo, hi))


def _log_int(n: int) -> float:
    if n.bit_length() < 1000:
        return math.log(n)
    shift = n.bit_length() - 64
    return math.log(n >> shift) + shift * math.log(2)


def _fmt(x) -> str:
    """Fixed 12-significant-digit rendering used in every JSON report."""
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return format(float(x), ".12g")
