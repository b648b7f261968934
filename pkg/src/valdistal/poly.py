"""Dense polynomials over a prime field F_p.

A polynomial c_0 + c_1 t + ... + c_n t^n is the tuple ``(c_0, ..., c_n)``
of ints in ``range(p)`` with ``c_n != 0``; the zero polynomial is ``()``.
All functions are pure and take the prime explicitly.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator

Poly = tuple

ZERO: Poly = ()
ONE: Poly = (1,)
T: Poly = (0, 1)


def trim(coeffs) -> Poly:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def const(c: int, p: int) -> Poly:
    c %= p
    return (c,) if c else ()


def deg(a: Poly) -> int:
    """Degree, with deg(0) = -1."""
    return len(a) - 1


def add(a: Poly, b: Poly, p: int) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return trim(out)


def neg(a: Poly, p: int) -> Poly:
    return tuple((-c) % p for c in a)


def sub(a: Poly, b: Poly, p: int) -> Poly:
    return add(a, neg(b, p), p)


def scale(a: Poly, c: int, p: int) -> Poly:
    c %= p
    if not c:
        return ()
    return tuple(x * c % p for x in a)


def mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    if len(a) == 1:
        return scale(b, a[0], p)
    if len(b) == 1:
        return scale(a, b[0], p)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(c % p for c in out)


def shift(a: Poly, k: int) -> Poly:
    """Multiply by t^k (k >= 0)."""
    return (0,) * k + a if a else ()


def divmod_(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    inv = pow(b[-1], p - 2, p)
    r = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i] * inv % p
        if c:
            q[i - db] = c
            for j, y in enumerate(b):
                r[i - db + j] = (r[i - db + j] - c * y) % p
    return trim(q), trim(r[:db])


def mod(a: Poly, b: Poly, p: int) -> Poly:
    return divmod_(a, b, p)[1]


def monic(a: Poly, p: int) -> Poly:
    if not a or a[-1] == 1:
        return a
    return scale(a, pow(a[-1], p - 2, p), p)


def gcd(a: Poly, b: Poly, p: int) -> Poly:
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def inverse_mod(a: Poly, m: Poly, p: int) -> Poly:
    """Inverse of a modulo m via the extended Euclidean algorithm."""
    r0, r1 = m, mod(a, m, p)
    s0, s1 = (), ONE
    while r1:
        q, r = divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
    if len(r0) != 1:
        raise ZeroDivisionError("polynomial not invertible modulo m")
    return mod(scale(s0, pow(r0[0], p - 2, p), p), m, p)


def evaluate(a: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def all_of_degree_below(n: int, p: int) -> Iterator[Poly]:
    """All p^n polynomials of degree < n, ordered by (degree, coefficients)."""
    yield ()
    for d in range(n):
        for lower in product(range(p), repeat=d):
            for lead in range(1, p):
                yield lower + (lead,)


def monics_of_degree(d: int, p: int) -> Iterator[Poly]:
    for lower in product(range(p), repeat=d):
        yield lower + (1,)


def is_irreducible(s: Poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(s)//2."""
    d = deg(s)
    if d < 1:
        return False
    for k in range(1, d // 2 + 1):
        for m in monics_of_degree(k, p):
            if not mod(s, m, p):
                return False
    return True


def to_str(a: Poly, var: str = "t") -> str:
    if not a:
        return "0"
    parts = []
    for i, c in enumerate(a):
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(parts)
