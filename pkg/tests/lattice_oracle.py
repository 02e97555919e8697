"""Brute-force oracle for limits of Z^2 under a 2x2 integer matrix.

Works only with Fractions and explicit lattices A^-n Z^2. It never calls the
package's Smith form, Hermite form or factorization code.

A decomposition G = (G ∩ l1) + (G ∩ l2) is searched over rational lines:
eigenlines, the coordinate axes and short integer directions. The type of a
line (the primes dividing its denominators without bound) is read from the
growth of the denominators between levels 6 and 12.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd, isqrt

LO, HI = 6, 12


def _primes(n: int) -> list[int]:
    n, out, p = abs(n), [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _vp(n: int, p: int) -> int:
    k = 0
    while n and n % p == 0:
        n //= p
        k += 1
    return k


def _mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def _apply(a, v):
    return (a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1])


def _power(a, n):
    out = [[1, 0], [0, 1]]
    for _ in range(n):
        out = _mul(out, a)
    return out


def _inverse_power(a, n):
    d = Fraction(a[0][0] * a[1][1] - a[0][1] * a[1][0])
    inv = [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
    out = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    for _ in range(n):
        out = _mul(out, inv)
    return out


def _content(a, v, n):
    w = _apply(_power(a, n), v)
    return gcd(w[0], w[1])


def line_type(a, v) -> tuple[int, ...]:
    """Primes p for which G ∩ Qv keeps gaining p in its denominators."""
    g_lo, g_hi = _content(a, v, LO), _content(a, v, HI)
    if g_hi == 0:
        return ()
    return tuple(p for p in _primes(g_hi) if _vp(g_hi, p) > _vp(g_lo, p))


def _splits(a, v1, v2) -> bool:
    """Is A^-LO Z^2 inside (G_HI ∩ Qv1) + (G_HI ∩ Qv2)?"""
    det = v1[0] * v2[1] - v1[1] * v2[0]
    g1, g2 = _content(a, v1, HI), _content(a, v2, HI)
    gens = _inverse_power(a, LO)
    for j in range(2):
        x = (gens[0][j], gens[1][j])
        # x = s v1 + t v2
        s = Fraction(x[0] * v2[1] - x[1] * v2[0]) / det
        t = Fraction(v1[0] * x[1] - v1[1] * x[0]) / det
        if (s * g1).denominator != 1 or (t * g2).denominator != 1:
            return False
    return True


def _eigenlines(a) -> list[tuple[int, int]]:
    tr = a[0][0] + a[1][1]
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    disc = tr * tr - 4 * det
    if disc < 0 or isqrt(disc) ** 2 != disc:
        return []
    out = []
    for lam2 in {tr + isqrt(disc), tr - isqrt(disc)}:
        # (A - lam) v = 0 with lam = lam2 / 2, scaled by 2
        r = [[2 * a[0][0] - lam2, 2 * a[0][1]], [2 * a[1][0], 2 * a[1][1] - lam2]]
        for row in r:
            if row != [0, 0]:
                v = (-row[1], row[0])
                break
        else:
            out.extend([(1, 0), (0, 1)])
            continue
        g = gcd(*v)
        out.append((v[0] // g, v[1] // g))
    return out


def _short_lines(bound: int = 8):
    seen = []
    for x, y in product(range(-bound, bound + 1), repeat=2):
        if (x, y) > (0, 0) and gcd(x, y) == 1:
            seen.append((x, y))
    return seen


def oracle(a) -> tuple[str, tuple]:
    """Return ("classified", sorted types) or ("bounds", ())."""
    det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    if det == 0:
        if _power(a, 2) == [[0, 0], [0, 0]]:
            return "classified", ()
        mu = a[0][0] + a[1][1]
        # limit of Z under multiplication by mu: denominators mu^n
        g_lo, g_hi = abs(mu) ** LO, abs(mu) ** HI
        t = tuple(p for p in _primes(g_hi) if _vp(g_hi, p) > _vp(g_lo, p)) if abs(mu) > 1 else ()
        return "classified", (t,)
    eig = _eigenlines(a)
    first = eig + [(1, 0), (0, 1)]
    pairs = [(u, v) for i, u in enumerate(first) for v in first[i + 1:]]
    pairs += [(u, v) for u in eig for v in _short_lines()]
    for u, v in pairs:
        if u[0] * v[1] - u[1] * v[0] == 0:
            continue
        if _splits(a, u, v):
            return "classified", tuple(sorted([line_type(a, u), line_type(a, v)]))
    return "bounds", ()
