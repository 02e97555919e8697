"""Immutable integer matrices and the lattice algorithms built on them."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels


class IntMatrix:
    """Dense integer matrix, row-major, immutable."""

    __slots__ = ("rows", "cols", "_d", "_hash")

    def __init__(self, data: Iterable[Sequence[int]] = (), cols: int | None = None):
        d = tuple(tuple(int(x) for x in r) for r in data)
        if cols is None:
            if not d:
                raise ValueError("column count required for a matrix with no rows")
            cols = len(d[0])
        for r in d:
            if len(r) != cols:
                raise ValueError("ragged matrix")
        self.rows = len(d)
        self.cols = cols
        self._d = d
        self._hash = None

    # construction helpers
    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(((int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMatrix":
        return cls(((0,) * n for _ in range(m)), n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        return cls((tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls(((entries[i] if i == j else 0 for j in range(n)) for i in range(n)), n)

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._d[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._d[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._d)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._d]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix((tuple(r[j] for r in self._d) for j in range(self.cols)), self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._d for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # arithmetic
    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if not self.rows or not other.cols:
            return IntMatrix.zeros(self.rows, other.cols)
        if not self.cols:
            return IntMatrix.zeros(self.rows, other.cols)
        return IntMatrix(kernels.matmul(self.tolist(), other.tolist(), self.cols, other.cols), other.cols)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(r, v) if a) for r in self._d)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same(other)
        return IntMatrix((tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._d, other._d)), self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same(other)
        return IntMatrix((tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._d, other._d)), self.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix((tuple(-a for a in r) for r in self._d), self.cols)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix((tuple(k * a for a in r) for r in self._d), self.cols)

    def __pow__(self, e: int) -> "IntMatrix":
        if not self.is_square() or e < 0:
            raise ValueError("power needs a square matrix and e >= 0")
        out = IntMatrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                out = out @ base
            e >>= 1
            if e:
                base = base @ base
        return out

    def _same(self, other: "IntMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix((tuple(self._d[i][j] for j in cols) for i in rows), len(cols))

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return IntMatrix((a + b for a, b in zip(self._d, other._d)), self.cols + other.cols)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._d))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, cols={self.cols})"


# ---------------------------------------------------------------- elimination

def hnf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite form ``h = u @ m`` with ``u`` unimodular."""
    if not m.rows:
        return m, IntMatrix((), 0)
    h, u = kernels.hermite(m.tolist(), m.cols, True)
    return IntMatrix(h, m.cols), IntMatrix(u, m.rows)


def _echelon_rows(rows: list[list[int]], ncols: int) -> list[list[int]]:
    if not rows:
        return []
    h, _ = kernels.hermite(rows, ncols, False)
    return [r for r in h if any(r)]


def rank(m: IntMatrix) -> int:
    if not m.rows or not m.cols:
        return 0
    if m.rows > m.cols:
        m = m.T
    return len(_echelon_rows(m.tolist(), m.cols))


def det(m: IntMatrix) -> int:
    """Fraction-free Bareiss determinant."""
    if not m.is_square():
        raise ValueError("det of non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ai, ak = a[i], a[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * ak[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a basis of the saturated integer kernel of ``m``.

    The basis is returned in row-Hermite form (transposed), so it is
    canonical for the lattice.
    """
    n = m.cols
    if not m.rows or not n:
        return IntMatrix.identity(n)
    h, u = kernels.hermite(m.T.tolist(), m.rows, True)
    r = sum(1 for row in h if any(row))
    ker = u[r:]
    ker = _echelon_rows(ker, n)
    return IntMatrix.from_columns(ker, n) if ker else IntMatrix.zeros(n, 0)


def image_basis(m: IntMatrix) -> IntMatrix:
    """Canonical basis (columns) of the lattice spanned by the columns of ``m``."""
    if not m.cols:
        return IntMatrix.zeros(m.rows, 0)
    rows = _echelon_rows(m.T.tolist(), m.rows)
    return IntMatrix.from_columns(rows, m.rows) if rows else IntMatrix.zeros(m.rows, 0)


def saturate(m: IntMatrix) -> IntMatrix:
    """Basis of (column span over Q) intersected with the integer lattice."""
    if not m.cols:
        return IntMatrix.zeros(m.rows, 0)
    perp = kernel_basis(m.T)
    if not perp.cols:
        return IntMatrix.identity(m.rows)
    return kernel_basis(perp.T)


def snf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``d = u @ m @ v`` with ``d_1 | d_2 | ...``."""
    rows, cols = m.rows, m.cols
    a = m.tolist()
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        ad, asr = a[dst], a[src]
        for k in range(cols):
            ad[k] -= q * asr[k]
        ud, us = u[dst], u[src]
        for k in range(rows):
            ud[k] -= q * us[k]

    def add_col(dst, src, q):  # col dst -= q * col src
        for r in a:
            r[dst] -= q * r[src]
        for r in v:
            r[dst] -= q * r[src]

    t = 0
    while t < min(rows, cols):
        # pivot: minimal nonzero absolute value in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, a[i][t] // p)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, a[t][j] // p)
                    if a[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, rows):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, "r")
                for j in range(t, cols):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), j, "c")
                _, k, kind = best
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            # divisibility against the trailing block
            p = a[t][t]
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # row t += row bad, then re-reduce
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return IntMatrix(a, cols), IntMatrix(u, rows), IntMatrix(v, cols)


def invariant_factors(m: IntMatrix) -> list[int]:
    """Nonzero diagonal of the Smith form (with 1s)."""
    d, _, _ = snf(m)
    return [d[i, i] for i in range(min(d.rows, d.cols)) if d[i, i]]


# ----------------------------------------------------------- lattice helpers

class Reducer:
    """Reduction of integer vectors modulo a full-rank lattice."""

    def __init__(self, basis: IntMatrix):
        n = basis.rows
        rows = _echelon_rows(basis.T.tolist(), n)
        if len(rows) != n:
            raise ValueError("lattice is not of full rank")
        self.rows = rows
        self.pivots = [next(k for k, x in enumerate(r) if x) for r in rows]
        self.index = 1
        for r, p in zip(rows, self.pivots):
            self.index *= r[p]

    def reduce(self, x: Sequence[int]) -> list[int]:
        x = list(x)
        for r, p in zip(self.rows, self.pivots):
            q = x[p] // r[p]
            if q:
                for k in range(p, len(x)):
                    x[k] -= q * r[k]
        return x


class LatticeSolver:
    """Integer coordinates of vectors in a fixed column basis."""

    def __init__(self, basis: IntMatrix):
        self.n, self.k = basis.rows, basis.cols
        n, k = self.n, self.k
        aug = [list(basis.col(j)) + [int(i == j) for i in range(k)] for j in range(k)]
        h, _ = kernels.hermite(aug, n + k, False) if k else ([], None)
        self.rows = []
        for r in h:
            piv = next((c for c in range(n) if r[c]), None)
            if piv is not None:
                self.rows.append((piv, r))

    def coords(self, x: Sequence[int]) -> list[int] | None:
        n, k = self.n, self.k
        x = list(x) + [0] * k
        for piv, r in self.rows:
            if x[piv] % r[piv]:
                return None
            q = x[piv] // r[piv]
            if q:
                for c in range(piv, n + k):
                    x[c] -= q * r[c]
        if any(x[:n]):
            return None
        return [-c for c in x[n:]]

    def matrix(self, m: IntMatrix) -> IntMatrix:
        """Coordinates of every column of ``m``; raises if one is outside."""
        cols = []
        for j in range(m.cols):
            c = self.coords(m.col(j))
            if c is None:
                raise ValueError("vector is not in the lattice")
            cols.append(c)
        return IntMatrix.from_columns(cols, self.k) if cols else IntMatrix.zeros(self.k, 0)


def solve_lattice(basis: IntMatrix, x: Sequence[int]) -> list[int] | None:
    """Integer coordinates of ``x`` in the column basis, or None."""
    return LatticeSolver(basis).coords(x)


def rational_solve(a: IntMatrix, b: Sequence[Sequence[Fraction]]) -> list[list[Fraction]] | None:
    """Solve ``a @ X = B`` over Q for square invertible ``a`` (B given by columns)."""
    n = a.rows
    m = [[Fraction(x) for x in a.row(i)] + [Fraction(col[i]) for col in b] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                mc = m[c]
                m[i] = [x - f * y for x, y in zip(m[i], mc)]
    return [[m[i][n + j] for i in range(n)] for j in range(len(b))]
