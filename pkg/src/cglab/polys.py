"""Dense univariate polynomials with integer coefficients.

Polynomials are tuples of ints, constant term first, with no trailing zeros
(the zero polynomial is ``()``).
"""
from __future__ import annotations

from math import gcd
from typing import Sequence

ZERO: tuple = ()
ONE: tuple = (1,)


def trim(p: Sequence[int]) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: tuple) -> int:
    return len(p) - 1


def add(p: tuple, q: tuple) -> tuple:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def neg(p: tuple) -> tuple:
    return tuple(-c for c in p)


def sub(p: tuple, q: tuple) -> tuple:
    return add(p, neg(q))


def mul(p: tuple, q: tuple) -> tuple:
    if not p or not q:
        return ZERO
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def scale(p: tuple, c: int) -> tuple:
    return trim(c * a for a in p)


def divmod_exact(p: tuple, q: tuple) -> tuple:
    """Quotient of ``p`` by ``q``; raises if the division is not exact in Z[z]."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = len(q) - 1
    lead = q[-1]
    if len(rem) - 1 < dq:
        if any(rem):
            raise ArithmeticError("inexact polynomial division")
        return ZERO
    quot = [0] * (len(rem) - dq)
    for k in range(len(rem) - 1 - dq, -1, -1):
        c = rem[k + dq]
        if c == 0:
            continue
        t, r = divmod(c, lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        quot[k] = t
        for i, b in enumerate(q):
            rem[k + i] -= t * b
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return trim(quot)


def content(p: tuple) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def primitive_part(p: tuple) -> tuple:
    c = content(p)
    if c == 0:
        return ZERO
    q = tuple(a // c for a in p)
    return q if q[-1] > 0 else neg(q)


def _pseudo_rem(p: tuple, q: tuple) -> tuple:
    rem = list(p)
    dq = len(q) - 1
    lead = q[-1]
    while len(rem) - 1 >= dq and rem:
        c = rem[-1]
        shift = len(rem) - 1 - dq
        rem = [lead * a for a in rem]
        for i, b in enumerate(q):
            rem[shift + i] -= c * b
        rem = list(trim(rem))
    return tuple(rem)


def poly_gcd(p: tuple, q: tuple) -> tuple:
    """Primitive gcd in Z[z] (primitive remainder sequence), positive leading coefficient."""
    p, q = primitive_part(p), primitive_part(q)
    if not p:
        return q
    if not q:
        return p
    cont = gcd(content(p), content(q))
    while q:
        p, q = q, primitive_part(_pseudo_rem(p, q))
    return scale(primitive_part(p), cont) if cont > 1 else primitive_part(p)


def evaluate(p: tuple, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def series(num: tuple, den: tuple, n_terms: int) -> list:
    """First ``n_terms`` power-series coefficients of ``num/den``; needs ``den(0) = +-1``."""
    if not den or den[0] not in (1, -1):
        raise ValueError("denominator must have constant term +-1")
    d0 = den[0]
    out = []
    for n in range(n_terms):
        acc = num[n] if n < len(num) else 0
        for i in range(1, min(n, len(den) - 1) + 1):
            acc -= den[i] * out[n - i]
        out.append(acc * d0)
    return out


def bareiss_det(matrix: list) -> tuple:
    """Determinant of a square matrix of polynomials by fraction-free elimination."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                t = sub(mul(piv, row_i[j]), mul(aik, row_k[j]))
                row_i[j] = divmod_exact(t, prev) if t else ZERO
            row_i[k] = ZERO
        prev = piv
    det = a[n - 1][n - 1]
    return det if sign > 0 else neg(det)


def format_poly(p: tuple, var: str = "z") -> str:
    if not p:
        return "0"
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            body = mono
        elif mono:
            body = f"{abs(c)}*{mono}"
        else:
            body = str(abs(c))
        terms.append(("-" if c < 0 else "+", body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for s, body in terms[1:]:
        out += f" {s} {body}"
    return out
