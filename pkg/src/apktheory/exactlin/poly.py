"""Integer polynomials: characteristic polynomials and factorization.

Polynomials are tuples of integer coefficients in ascending degree order.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, isqrt
from typing import Sequence

from . import kernels
from .matrix import IntMatrix

Poly = tuple[int, ...]


def trim(p: Sequence[int]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def pmul(a: Sequence[int], b: Sequence[int]) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def ppow(a: Sequence[int], e: int) -> Poly:
    out: Poly = (1,)
    for _ in range(e):
        out = pmul(out, a)
    return out


def pdivmod_monic(a: Sequence[int], b: Sequence[int]) -> tuple[Poly, Poly]:
    """Divide by a monic polynomial."""
    a = list(a)
    db = len(b) - 1
    if b[-1] != 1:
        raise ValueError("divisor must be monic")
    if len(a) - 1 < db:
        return (), trim(a)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db]
        q[k] = c
        if c:
            for i in range(db + 1):
                a[k + i] -= c * b[i]
    return trim(q), trim(a[:db])


def peval(p: Sequence[int], x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pformat(p: Sequence[int], var: str = "x") -> str:
    terms = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def matrix_poly(p: Sequence[int], m: IntMatrix) -> IntMatrix:
    """Evaluate p(m) by Horner's rule."""
    n = m.rows
    acc = IntMatrix.zeros(n, n)
    ident = IntMatrix.identity(n)
    for c in reversed(p):
        acc = acc @ m + ident.scale(c)
    return acc


# ------------------------------------------------------------ char poly (CRT)

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _prime(i: int) -> int:
    """The i-th prime below 2**31, counting downward."""
    start = (1 << 31) - 1 if i == 0 else _prime(i - 1) - 2
    n = start
    while not _is_prime(n):
        n -= 2
    return n


def coefficient_bound(m: IntMatrix) -> int:
    """Bound on |coefficients| of det(xI - m) from Hadamard's inequality."""
    n = m.rows
    norms = sorted((isqrt(sum(x * x for x in m.col(j))) + 1 for j in range(n)), reverse=True)
    best, prod = 1, 1
    for k in range(1, n + 1):
        prod *= norms[k - 1]
        best = max(best, comb(n, k) * prod)
    return best


def char_poly(m: IntMatrix) -> Poly:
    """Exact characteristic polynomial det(xI - m), monic, ascending."""
    if not m.is_square():
        raise ValueError("char_poly needs a square matrix")
    n = m.rows
    if n == 0:
        return (1,)
    bound = 2 * coefficient_bound(m) + 1
    a = m.tolist()
    modulus, residues = 1, [0] * (n + 1)
    i = 0
    while modulus < bound:
        p = _prime(i)
        i += 1
        cp = kernels.charpoly_mod(a, p)
        # CRT merge
        inv = pow(modulus, -1, p)
        for k in range(n + 1):
            t = (cp[k] - residues[k]) * inv % p
            residues[k] += modulus * t
        modulus *= p
    half = modulus // 2
    return tuple(r - modulus if r > half else r for r in residues)


# ----------------------------------------------------------------- factoring

def integer_roots(p: Sequence[int], bound: int) -> list[int]:
    """Integer roots r with |r| <= bound (p(0) != 0 assumed for r != 0)."""
    roots = []
    if p and p[0] == 0:
        roots.append(0)
    c0 = next((c for c in p if c), 0)
    for d in range(1, bound + 1):
        if c0 % d:
            continue
        for r in (d, -d):
            if peval(p, r) == 0:
                roots.append(r)
    return sorted(roots)


def _sort_key(f: Poly) -> tuple:
    return (len(f), tuple(abs(c) for c in reversed(f)), tuple(reversed(f)))


def factor(p: Sequence[int], root_bound: int | None = None) -> list[tuple[Poly, int]]:
    """Irreducible factorization of a monic integer polynomial.

    Linear factors are found by direct root search; the remaining cofactor
    is handed to sympy (square-free decomposition and Zassenhaus).
    """
    p = trim(p)
    if not p or p[-1] != 1:
        raise ValueError("factor expects a monic polynomial")
    if root_bound is None:
        root_bound = 1 + max(abs(c) for c in p[:-1]) if len(p) > 1 else 1
    out: dict[Poly, int] = {}
    rest: Poly = p
    for r in integer_roots(p, root_bound):
        lin = (-r, 1)
        while True:
            q, rem = pdivmod_monic(rest, lin)
            if rem:
                break
            out[lin] = out.get(lin, 0) + 1
            rest = q
    if len(rest) > 1:
        # no rational roots left, so degree <= 3 is already irreducible
        pieces = [(rest, 1)] if len(rest) <= 4 else _sympy_factor(rest)
        for f, e in pieces:
            out[f] = out.get(f, 0) + e
    return sorted(out.items(), key=lambda fe: _sort_key(fe[0]))


def _sympy_factor(p: Poly) -> list[tuple[Poly, int]]:
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Integer(c) * x**k for k, c in enumerate(p))
    _, fl = sympy.factor_list(expr, x)
    pieces = []
    for f, e in fl:
        coeffs = sympy.Poly(f, x).all_coeffs()
        q = tuple(int(c) for c in reversed(coeffs))
        if q[-1] < 0:
            q = tuple(-c for c in q)
        pieces.append((q, int(e)))
    return pieces


def char_poly_factor(m: IntMatrix) -> list[tuple[Poly, int]]:
    """Factor det(xI - m) into irreducibles with multiplicities."""
    cp = char_poly(m)
    bound = max((sum(abs(x) for x in m.row(i)) for i in range(m.rows)), default=0)
    return factor(cp, root_bound=max(bound, 1))
