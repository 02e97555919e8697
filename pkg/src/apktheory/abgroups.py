"""Finitely generated abelian groups with endomorphisms and their stationary limits.

The limit of ``G -> G -> ...`` (every arrow the same endomorphism) is
classified as a sum of groups ``Z``, ``Z[1/m]`` and finite cyclic groups
whenever that can be certified. The certificate for the divisible part
works with the prime support of each eigenvalue block:

* every irreducible factor ``f`` of the characteristic polynomial whose
  constant term is a unit contributes ``Z`` summands;
* a non-unit factor contributes ``Z[1/S]`` summands, ``S`` the primes of
  ``f(0)``, provided ``f`` is congruent to a power of ``x`` modulo each of
  those primes (true for every integral eigenvalue);
* the blocks really split off when, for every support class ``S``, the part
  of the limit supported strictly above ``S`` is generated by the pieces of
  the classes strictly above ``S``. That is a nilpotency test on a finite
  quotient lattice, so it is exact.

Torsion in the limit is the eventual image of the finite-level torsion; a
finite group always splits off a limit of this kind.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from .exactlin import (
    IntMatrix,
    LatticeSolver,
    Reducer,
    det,
    factor,
    hnf,
    image_basis,
    kernel_basis,
    matrix_poly,
    rank,
    saturate,
    snf,
)
from .exactlin.poly import Poly, char_poly, ppow

CLASSIFIED = "classified"
BOUNDS = "rank-bounds-only"
UNRESOLVED = "unresolved-presentation"


class NotIntertwining(ValueError):
    """A proposed map of towers does not commute with the endomorphisms."""


class ClassificationBudget(Exception):
    """Raised when a classification exceeds its time budget."""


# ------------------------------------------------------------------ types

@dataclass(frozen=True)
class PresentedGroup:
    generators: int
    relations: IntMatrix  # columns are relators

    def __post_init__(self):
        if self.relations.rows != self.generators:
            raise ValueError("relation matrix must have one row per generator")

    @classmethod
    def free(cls, n: int) -> "PresentedGroup":
        return cls(n, IntMatrix.zeros(n, 0))


@dataclass(frozen=True)
class StationarySystem:
    group: PresentedGroup
    endo: IntMatrix

    def __post_init__(self):
        n = self.group.generators
        if self.endo.shape != (n, n):
            raise ValueError("endomorphism must be square on the generators")
        rel = self.group.relations
        if rel.cols:
            solver = LatticeSolver(rel)
            img = self.endo @ rel
            for j in range(img.cols):
                if solver.coords(img.col(j)) is None:
                    raise ValueError("endomorphism does not preserve the relations")

    @classmethod
    def free(cls, endo: IntMatrix) -> "StationarySystem":
        return cls(PresentedGroup.free(endo.rows), endo)

    @property
    def n(self) -> int:
        return self.group.generators


@dataclass(frozen=True)
class SystemMap:
    source: StationarySystem
    target: StationarySystem
    matrix: IntMatrix

    def __post_init__(self):
        m = self.matrix
        if m.shape != (self.target.n, self.source.n):
            raise ValueError("map matrix has the wrong shape")
        rel = self.target.group.relations
        solver = LatticeSolver(rel) if rel.cols else None

        def inside(v: IntMatrix) -> bool:
            if solver is None:
                return v.is_zero()
            return all(solver.coords(v.col(j)) is not None for j in range(v.cols))

        if not inside(m @ self.source.group.relations):
            raise NotIntertwining("map does not send relations to relations")
        if not inside(m @ self.source.endo - self.target.endo @ m):
            raise NotIntertwining("map does not intertwine the endomorphisms")


@dataclass(frozen=True)
class LimitGroup:
    """Z^free ⊕ Z[1/m]^k ... ⊕ torsion, or a bound form when not certified."""

    free_rank: int = 0
    inverted: tuple[tuple[int, int], ...] = ()
    torsion: tuple[int, ...] = ()
    status: str = CLASSIFIED
    undetermined_rank: int = 0
    splitting: str = "verified"
    witness: tuple = field(default=(), compare=False)

    def __post_init__(self):
        merged: dict[int, int] = {}
        for m, k in self.inverted:
            if k:
                merged[m] = merged.get(m, 0) + k
        object.__setattr__(self, "inverted", tuple(sorted(merged.items(), key=lambda t: -t[0])))
        object.__setattr__(self, "torsion", normalize_torsion(self.torsion))

    @property
    def rank(self) -> int:
        return self.free_rank + sum(k for _, k in self.inverted) + self.undetermined_rank

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def type_form(self) -> tuple:
        """Isomorphism invariant: Z[1/m] summands keyed by the primes of m."""
        types: dict[tuple[int, ...], int] = {}
        for m, k in self.inverted:
            key = tuple(prime_factors(m))
            types[key] = types.get(key, 0) + k
        if self.free_rank:
            types[()] = types.get((), 0) + self.free_rank
        return (self.status, tuple(sorted(types.items())), self.torsion, self.undetermined_rank)

    def isomorphic(self, other: "LimitGroup") -> bool:
        return self.type_form() == other.type_form()

    def __str__(self) -> str:
        return format_group(self)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "free_rank": self.free_rank,
            "inverted": [[m, k] for m, k in self.inverted],
            "torsion": list(self.torsion),
            "undetermined_rank": self.undetermined_rank,
            "splitting": self.splitting,
            "text": format_group(self),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LimitGroup":
        return cls(
            free_rank=d["free_rank"],
            inverted=tuple((m, k) for m, k in d["inverted"]),
            torsion=tuple(d["torsion"]),
            status=d["status"],
            undetermined_rank=d["undetermined_rank"],
            splitting=d["splitting"],
        )


def normalize_torsion(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of a finite abelian group."""
    orders = [abs(int(d)) for d in orders if abs(int(d)) > 1]
    if not orders:
        return ()
    d, _, _ = snf(IntMatrix.diag(orders))
    return tuple(x for x in (d[i, i] for i in range(len(orders))) if x > 1)


def _sup(k: int) -> str:
    return "" if k == 1 else f"^{k}"


def format_group(g: LimitGroup) -> str:
    parts = []
    for m, k in g.inverted:
        parts.append(f"Z[1/{m}]{_sup(k)}")
    if g.status == BOUNDS:
        if g.free_rank:
            parts.append(f"Z^>={g.free_rank}")
        if g.undetermined_rank:
            parts.append(f"Q^<={g.undetermined_rank}")
    elif g.free_rank:
        parts.append(f"Z{_sup(g.free_rank)}")
    counts: dict[int, int] = {}
    for d in g.torsion:
        counts[d] = counts.get(d, 0) + 1
    for d in sorted(counts):
        parts.append(f"Z_{d}{_sup(counts[d])}")
    text = " ⊕ ".join(parts) if parts else "0"
    if g.status == UNRESOLVED:
        text += " (unresolved)"
    return text


def direct_sum(a: LimitGroup, b: LimitGroup) -> LimitGroup:
    if a.status == UNRESOLVED or b.status == UNRESOLVED:
        status = UNRESOLVED
    elif a.status == BOUNDS or b.status == BOUNDS:
        status = BOUNDS
    else:
        status = CLASSIFIED
    order = ["verified", "not-needed", "assumed"]
    splitting = max(a.splitting, b.splitting, key=order.index)
    return LimitGroup(
        free_rank=a.free_rank + b.free_rank,
        inverted=a.inverted + b.inverted,
        torsion=a.torsion + b.torsion,
        status=status,
        undetermined_rank=a.undetermined_rank + b.undetermined_rank,
        splitting=splitting,
    )


# --------------------------------------------------------------- numbers

def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n and p < 100000:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        if p * p <= n:
            import sympy

            out.extend(int(q) for q in sympy.factorint(n))
        else:
            out.append(n)
    return sorted(set(out))


def _radical(n: int) -> int:
    r = 1
    for p in prime_factors(n):
        r *= p
    return r


def _integer_root(n: int, k: int) -> int | None:
    lo, hi = 0, 1
    while hi**k < n:
        hi *= 2
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid**k
        if v == n:
            return mid
        if v < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


# ------------------------------------------------------------ operations

def _left_inverse(basis: IntMatrix) -> IntMatrix:
    """P with P @ basis = I for a saturated column basis."""
    n, r = basis.shape
    if r == 0:
        return IntMatrix.zeros(0, n)
    h, u = hnf(basis)
    if any(h[i, j] != int(i == j) for i in range(r) for j in range(r)):
        raise ValueError("basis is not saturated")
    return u.submatrix(range(r), range(n))


def _restrict(s: StationarySystem, basis: IntMatrix) -> StationarySystem:
    """Restrict to a saturated, invariant sublattice containing the relations."""
    p = _left_inverse(basis)
    endo = p @ s.endo @ basis
    rel = p @ s.group.relations
    return StationarySystem(PresentedGroup(basis.cols, rel), endo)


def remove_eventual_kernel(s: StationarySystem) -> StationarySystem:
    """Restrict to the saturated eventual image (plus the relations)."""
    n = s.n
    rel = s.group.relations
    cur = IntMatrix.identity(n)
    r = n
    while True:
        img = s.endo @ cur
        nxt = saturate(img.hstack(rel)) if rel.cols else saturate(img)
        if nxt.cols == r:
            break
        cur, r = nxt, nxt.cols
    if r == n:
        return s
    return _restrict(s, cur)


def _complete(sub: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Unimodular u with u @ sub = [I; 0] for saturated ``sub``; returns (u, u^-1)."""
    n = sub.rows
    if sub.cols == 0:
        return IntMatrix.identity(n), IntMatrix.identity(n)
    _, u = hnf(sub)
    _, uinv = hnf(u)
    return u, uinv


@dataclass
class _Options:
    verify: str = "auto"  # on | off | auto
    deadline: float | None = None
    auto_limit: int = 400


def _check_time(opts: _Options) -> None:
    if opts.deadline is not None and time.monotonic() > opts.deadline:
        raise ClassificationBudget("classification exceeded the time budget")


def classify_limit(
    s: StationarySystem,
    verify: str = "auto",
    deadline: float | None = None,
) -> LimitGroup:
    """Classify the inductive limit of ``s``."""
    opts = _Options(verify=verify, deadline=deadline)
    s = remove_eventual_kernel(s)
    r = s.n
    if r == 0:
        return LimitGroup(splitting="not-needed")
    rel = s.group.relations
    sat = saturate(rel) if rel.cols else IntMatrix.zeros(r, 0)
    k = sat.cols
    u, uinv = _complete(sat)
    b = u @ s.endo @ uinv
    free_endo = b.submatrix(range(k, r), range(k, r))
    torsion, witness = (), ()
    if k:
        rel_s = (u @ rel).submatrix(range(k), range(rel.cols))
        torsion, witness = _eventual_torsion(b.submatrix(range(k), range(k)), rel_s, opts)
    g = _classify_free(free_endo, opts)
    return LimitGroup(
        free_rank=g.free_rank,
        inverted=g.inverted,
        torsion=torsion,
        status=g.status,
        undetermined_rank=g.undetermined_rank,
        splitting=g.splitting,
        witness=witness,
    )


def _eventual_torsion(a: IntMatrix, rel: IntMatrix, opts: _Options) -> tuple[tuple[int, ...], tuple]:
    """Eventual image of ``a`` on the finite group Z^k / rel."""
    k = a.rows
    cur = IntMatrix.identity(k)
    index = abs(det(image_basis(rel)))
    order = index
    level = 0
    while True:
        _check_time(opts)
        nxt = image_basis((a @ cur).hstack(rel))
        o = index // abs(det(nxt))
        if o == order:
            break
        cur, order, level = nxt, o, level + 1
        if o == 1:
            break
    if order == 1:
        return (), ("level", level)
    solver = LatticeSolver(cur)
    coords = solver.matrix(rel)
    d, _, _ = snf(coords)
    diag = [d[i, i] for i in range(min(d.rows, d.cols))]
    return tuple(x for x in diag if x > 1), ("level", level, "snf", tuple(diag))


@dataclass(frozen=True)
class _Block:
    poly: Poly
    mult: int
    support: tuple[int, ...]  # () for unit blocks
    good: bool  # False: non-unit and not nilpotent mod its primes

    @property
    def dim(self) -> int:
        return (len(self.poly) - 1) * self.mult

    def label(self) -> int:
        c0 = abs(self.poly[0])
        deg = len(self.poly) - 1
        if deg == 1:
            return c0
        root = _integer_root(c0, deg)
        return root if root is not None else _radical(c0)


def _blocks(m: IntMatrix) -> list[_Block]:
    cp = char_poly(m)
    bound = max((sum(abs(x) for x in m.row(i)) for i in range(m.rows)), default=1)
    out = []
    for f, e in factor(cp, root_bound=max(bound, 1)):
        c0 = f[0]
        if abs(c0) == 1:
            out.append(_Block(f, e, (), True))
            continue
        primes = prime_factors(c0)
        good = all(all(c % p == 0 for c in f[:-1]) for p in primes)
        out.append(_Block(f, e, tuple(primes), good))
    return out


def _classify_free(m: IntMatrix, opts: _Options) -> LimitGroup:
    q = m.rows
    if q == 0:
        return LimitGroup(splitting="not-needed")
    blocks = _blocks(m)
    unit_rank = sum(b.dim for b in blocks if not b.support)
    if any(not b.good for b in blocks):
        return LimitGroup(
            free_rank=unit_rank,
            status=BOUNDS,
            undetermined_rank=q - unit_rank,
            splitting="not-needed",
        )
    inverted = []
    for b in blocks:
        if b.support:
            inverted.append((b.label(), b.dim))
    classes = sorted({b.support for b in blocks if b.support})
    if len(classes) <= 1:
        splitting = "not-needed"
    elif opts.verify == "off" or (opts.verify == "auto" and q > opts.auto_limit):
        splitting = "assumed"
    else:
        ok = _verify_split(m, blocks, classes, opts)
        if not ok:
            return LimitGroup(
                free_rank=unit_rank,
                status=BOUNDS,
                undetermined_rank=q - unit_rank,
                splitting="failed",
            )
        splitting = "verified"
    return LimitGroup(free_rank=unit_rank, inverted=tuple(inverted), splitting=splitting)


def _verify_split(m: IntMatrix, blocks: list[_Block], classes: list[tuple[int, ...]], opts: _Options) -> bool:
    """Certify that the limit is the direct sum of its support-class pieces."""
    nonunit = [b for b in blocks if b.support]
    kernels: dict[Poly, IntMatrix] = {}
    for b in nonunit:
        _check_time(opts)
        kernels[b.poly] = kernel_basis(matrix_poly(ppow(b.poly, b.mult), m))

    def lattice_above(s: tuple[int, ...], strict: bool) -> IntMatrix | None:
        cols = [kernels[b.poly] for b in nonunit
                if set(b.support) >= set(s) and (not strict or set(b.support) != set(s))]
        if not cols:
            return None
        acc = cols[0]
        for c in cols[1:]:
            acc = acc.hstack(c)
        return saturate(acc)

    checks = set(classes)
    checks.add(())
    for s in sorted(checks):
        _check_time(opts)
        big = lattice_above(s, strict=True)
        if big is None:
            continue
        parts = [lattice_above(t, strict=False) for t in classes
                 if set(t) > set(s)]
        parts = [p for p in parts if p is not None]
        # generated part, in coordinates of the saturated lattice
        solver = LatticeSolver(big)
        gen = None
        for p in parts:
            c = solver.matrix(p)
            gen = c if gen is None else gen.hstack(c)
        if gen is None or rank(gen) < big.cols:
            return False
        endo = solver.matrix(m @ big)
        if not _nilpotent_mod(endo, image_basis(gen), opts):
            return False
    return True


def _nilpotent_mod(a: IntMatrix, sub: IntMatrix, opts: _Options) -> bool:
    """Is ``a`` nilpotent on the finite group Z^n / sub?"""
    red = Reducer(sub)
    if red.index == 1:
        return True
    steps = red.index.bit_length() + 1
    cur = [red.reduce(a.col(j)) for j in range(a.cols)]
    cur = [c for c in cur if any(c)]
    for _ in range(steps):
        _check_time(opts)
        if not cur:
            return True
        cur = [red.reduce(a.apply(c)) for c in cur]
        cur = [c for c in cur if any(c)]
    return not cur


def limit_kernel(f: SystemMap) -> StationarySystem:
    """Stationary system whose limit is the kernel of the limit map."""
    src, tgt = f.source, f.target
    rt = tgt.group.relations
    big = f.matrix.hstack(-rt) if rt.cols else f.matrix
    ker = kernel_basis(big)
    gens = image_basis(ker.submatrix(range(src.n), range(ker.cols)))
    if gens.cols == 0:
        return StationarySystem.free(IntMatrix.zeros(0, 0))
    solver = LatticeSolver(gens)
    endo = solver.matrix(src.endo @ gens)
    rel = solver.matrix(src.group.relations)
    return StationarySystem(PresentedGroup(gens.cols, rel), endo)


def limit_cokernel(f: SystemMap) -> StationarySystem:
    """Stationary system whose limit is the cokernel of the limit map."""
    tgt = f.target
    rel = tgt.group.relations.hstack(f.matrix)
    rel = image_basis(rel)
    return StationarySystem(PresentedGroup(tgt.n, rel), tgt.endo)


def limit_image_rank(f: SystemMap) -> int:
    """Rank of the image of the limit map."""
    src = classify_limit(f.source)
    ker = classify_limit(limit_kernel(f))
    return src.rank - ker.rank
