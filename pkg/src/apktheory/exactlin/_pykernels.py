"""Pure-Python integer kernels.

These are the reference implementations. The compiled module ``_ckernels``
exposes the same three functions and falls back to these on int64 overflow.
"""

from __future__ import annotations

Rows = list[list[int]]


def hermite(a: Rows, ncols: int, transform: bool = True) -> tuple[Rows, Rows | None]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u @ a == h``, ``u`` unimodular, ``h`` in row
    echelon form with positive pivots and entries above each pivot reduced
    into ``[0, pivot)``. ``u`` is ``None`` when ``transform`` is false.
    """
    h = [list(r) for r in a]
    m = len(h)
    u = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            piv = -1
            best = 0
            for i in range(r, m):
                v = h[i][c]
                if v:
                    av = v if v > 0 else -v
                    if piv < 0 or av < best:
                        piv, best = i, av
            if piv < 0:
                break
            if piv != r:
                h[r], h[piv] = h[piv], h[r]
                if u is not None:
                    u[r], u[piv] = u[piv], u[r]
            hr = h[r]
            p = hr[c]
            done = True
            for i in range(r + 1, m):
                v = h[i][c]
                if v:
                    q = v // p
                    hi = h[i]
                    for k in range(c, ncols):
                        hi[k] -= q * hr[k]
                    if u is not None:
                        ui, ur = u[i], u[r]
                        for k in range(m):
                            ui[k] -= q * ur[k]
                    if hi[c]:
                        done = False
            if done:
                break
        if r < m and h[r][c]:
            hr = h[r]
            if hr[c] < 0:
                for k in range(c, ncols):
                    hr[k] = -hr[k]
                if u is not None:
                    u[r] = [-x for x in u[r]]
            p = hr[c]
            for i in range(r):
                v = h[i][c]
                q = v // p
                if q:
                    hi = h[i]
                    for k in range(c, ncols):
                        hi[k] -= q * hr[k]
                    if u is not None:
                        ui, ur = u[i], u[r]
                        for k in range(m):
                            ui[k] -= q * ur[k]
            r += 1
    return h, u


def matmul(a: Rows, b: Rows, inner: int, ncols: int) -> Rows:
    """Integer matrix product."""
    bt = [[b[k][j] for k in range(inner)] for j in range(ncols)]
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([sum(x * col[k] for k, x in nz) for col in bt])
    return out


def charpoly_mod(a: Rows, p: int) -> list[int]:
    """Characteristic polynomial of ``a`` modulo a prime ``p``.

    Coefficients are ascending; the result is monic of degree ``len(a)``.
    Uses Hessenberg reduction followed by the standard recurrence.
    """
    n = len(a)
    h = [[x % p for x in row] for row in a]
    for j in range(n - 2):
        piv = -1
        for i in range(j + 1, n):
            if h[i][j]:
                piv = i
                break
        if piv < 0:
            continue
        t = j + 1
        if piv != t:
            h[piv], h[t] = h[t], h[piv]
            for row in h:
                row[piv], row[t] = row[t], row[piv]
        inv = pow(h[t][j], p - 2, p)
        for i in range(t + 1, n):
            f = h[i][j] * inv % p
            if f:
                hi, ht = h[i], h[t]
                for k in range(n):
                    hi[k] = (hi[k] - f * ht[k]) % p
                for row in h:
                    row[t] = (row[t] + f * row[i]) % p
    # p_k is the charpoly of the leading k x k block
    polys = [[1]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = [0] + prev
        hk = h[k - 1][k - 1]
        for i in range(len(prev)):
            cur[i] = (cur[i] - hk * prev[i]) % p
        prod = 1
        for i in range(k - 1, 0, -1):
            prod = prod * h[i][i - 1] % p
            if not prod:
                break
            coef = prod * h[i - 1][k - 1] % p
            if coef:
                q = polys[i - 1]
                for t2 in range(len(q)):
                    cur[t2] = (cur[t2] - coef * q[t2]) % p
        polys.append(cur)
    return polys[n]
