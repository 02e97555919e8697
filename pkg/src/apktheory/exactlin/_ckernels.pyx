# cython: boundscheck=False, wraparound=False, cdivision=False
"""Compiled int64 kernels.

Same signatures as ``_pykernels``. Arithmetic is overflow-checked; any
overflow (or an input entry outside int64) falls back to the Python
implementation, so results are always exact.
"""

cimport cython
from cpython.array cimport array, clone

from . import _pykernels

ctypedef long long i64

cdef array _I64 = array("q")

cdef inline i64 _fdiv(i64 a, i64 b):
    # floor division, b > 0 or b < 0
    cdef i64 q = a // b
    return q


cdef array _flatten(rows, Py_ssize_t m, Py_ssize_t n):
    cdef array out = clone(_I64, m * n, zero=True)
    cdef i64[:] v = out
    cdef Py_ssize_t i, j
    for i in range(m):
        row = rows[i]
        for j in range(n):
            v[i * n + j] = row[j]
    return out


cdef list _unflatten(i64[:] v, Py_ssize_t m, Py_ssize_t n):
    return [[v[i * n + j] for j in range(n)] for i in range(m)]


@cython.overflowcheck(True)
cdef int _hermite(i64[:] h, i64[:] u, Py_ssize_t m, Py_ssize_t n, bint tr) except -1:
    cdef Py_ssize_t r = 0, c, i, k, piv
    cdef i64 best, v, av, p, q, t
    cdef bint done
    for c in range(n):
        if r == m:
            break
        while True:
            piv = -1
            best = 0
            for i in range(r, m):
                v = h[i * n + c]
                if v != 0:
                    av = v if v > 0 else -v
                    if piv < 0 or av < best:
                        piv = i
                        best = av
            if piv < 0:
                break
            if piv != r:
                for k in range(n):
                    t = h[r * n + k]; h[r * n + k] = h[piv * n + k]; h[piv * n + k] = t
                if tr:
                    for k in range(m):
                        t = u[r * m + k]; u[r * m + k] = u[piv * m + k]; u[piv * m + k] = t
            p = h[r * n + c]
            done = True
            for i in range(r + 1, m):
                v = h[i * n + c]
                if v != 0:
                    q = _fdiv(v, p)
                    for k in range(c, n):
                        h[i * n + k] = h[i * n + k] - q * h[r * n + k]
                    if tr:
                        for k in range(m):
                            u[i * m + k] = u[i * m + k] - q * u[r * m + k]
                    if h[i * n + c] != 0:
                        done = False
            if done:
                break
        if r < m and h[r * n + c] != 0:
            if h[r * n + c] < 0:
                for k in range(c, n):
                    h[r * n + k] = -h[r * n + k]
                if tr:
                    for k in range(m):
                        u[r * m + k] = -u[r * m + k]
            p = h[r * n + c]
            for i in range(r):
                q = _fdiv(h[i * n + c], p)
                if q != 0:
                    for k in range(c, n):
                        h[i * n + k] = h[i * n + k] - q * h[r * n + k]
                    if tr:
                        for k in range(m):
                            u[i * m + k] = u[i * m + k] - q * u[r * m + k]
            r += 1
    return 0


def hermite(a, Py_ssize_t ncols, bint transform=True):
    cdef Py_ssize_t m = len(a)
    cdef array h, u
    cdef Py_ssize_t i
    try:
        h = _flatten(a, m, ncols)
        u = clone(_I64, m * m if transform else 1, zero=True)
        if transform:
            for i in range(m):
                u.data.as_longlongs[i * m + i] = 1
        _hermite(h, u, m, ncols, transform)
    except OverflowError:
        return _pykernels.hermite(a, ncols, transform)
    return _unflatten(h, m, ncols), (_unflatten(u, m, m) if transform else None)


@cython.overflowcheck(True)
cdef int _matmul(i64[:] a, i64[:] b, i64[:] out, Py_ssize_t m, Py_ssize_t inner, Py_ssize_t n) except -1:
    cdef Py_ssize_t i, j, k
    cdef i64 x
    for i in range(m):
        for k in range(inner):
            x = a[i * inner + k]
            if x != 0:
                for j in range(n):
                    out[i * n + j] = out[i * n + j] + x * b[k * n + j]
    return 0


def matmul(a, b, Py_ssize_t inner, Py_ssize_t ncols):
    cdef Py_ssize_t m = len(a)
    cdef array fa, fb, out
    try:
        fa = _flatten(a, m, inner)
        fb = _flatten(b, inner, ncols)
        out = clone(_I64, m * ncols, zero=True)
        _matmul(fa, fb, out, m, inner, ncols)
    except OverflowError:
        return _pykernels.matmul(a, b, inner, ncols)
    return _unflatten(out, m, ncols)


cdef i64 _powmod(i64 b, i64 e, i64 p):
    cdef i64 r = 1
    b %= p
    while e > 0:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


def charpoly_mod(a, i64 p):
    """Characteristic polynomial mod a prime below 2**31."""
    if p >= (1 << 31):
        return _pykernels.charpoly_mod(a, p)
    cdef Py_ssize_t n = len(a)
    cdef array hh = clone(_I64, max(n * n, 1), zero=True)
    cdef i64[:] h = hh
    cdef Py_ssize_t i, j, k, piv, t, kk, ii
    cdef i64 f, inv, tmp, hk, prod, coef
    for i in range(n):
        row = a[i]
        for j in range(n):
            h[i * n + j] = row[j] % p
    for j in range(n - 2):
        piv = -1
        for i in range(j + 1, n):
            if h[i * n + j] != 0:
                piv = i
                break
        if piv < 0:
            continue
        t = j + 1
        if piv != t:
            for k in range(n):
                tmp = h[piv * n + k]; h[piv * n + k] = h[t * n + k]; h[t * n + k] = tmp
            for k in range(n):
                tmp = h[k * n + piv]; h[k * n + piv] = h[k * n + t]; h[k * n + t] = tmp
        inv = _powmod(h[t * n + j], p - 2, p)
        for i in range(t + 1, n):
            f = h[i * n + j] * inv % p
            if f != 0:
                for k in range(n):
                    h[i * n + k] = (h[i * n + k] - f * h[t * n + k]) % p
                for k in range(n):
                    h[k * n + t] = (h[k * n + t] + f * h[k * n + i]) % p
    # polys[k] has k+1 coefficients, stored in a triangular buffer
    cdef array pp = clone(_I64, (n + 1) * (n + 2) // 2, zero=True)
    cdef i64[:] P = pp
    P[0] = 1
    cdef Py_ssize_t off, poff, qoff
    for kk in range(1, n + 1):
        off = kk * (kk + 1) // 2
        poff = (kk - 1) * kk // 2
        for i in range(kk):
            P[off + i + 1] = P[poff + i]
        hk = h[(kk - 1) * n + kk - 1]
        for i in range(kk):
            P[off + i] = (P[off + i] - hk * P[poff + i]) % p
        prod = 1
        ii = kk - 1
        while ii >= 1:
            prod = prod * h[ii * n + ii - 1] % p
            if prod == 0:
                break
            coef = prod * h[(ii - 1) * n + kk - 1] % p
            if coef != 0:
                qoff = (ii - 1) * ii // 2
                for i in range(ii):
                    P[off + i] = (P[off + i] - coef * P[qoff + i]) % p
            ii -= 1
    off = n * (n + 1) // 2
    return [int(P[off + i]) for i in range(n + 1)]
