"""The collared Anderson-Putnam complex, its cochains and substitution matrices.

2-cells are collared prototiles. The boundary of each is cut at the points
where three or more tiles of its collar meet; the arcs in between are
1-cells once identified with the matching arcs of neighbouring collared
tiles, and those cut points, identified the same way, are the 0-cells. In
dimension 1 the collared tiles are the 1-cells and their end points, glued
along legal two-tile words, are the 0-cells.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .collar import CollaredRule, collared_matrix
from .exactlin import IntMatrix
from .substitution import RuleError
from .substitution import geometry as g


_HALF = Fraction(1, 2)


class ComplexError(RuleError):
    """Collar data gave contradictory identifications."""


@dataclass(frozen=True)
class Cell:
    dim: int
    id: int
    label: str


@dataclass
class Incidence:
    dimension: int
    boundary: tuple  # per 2-cell: ((1-cell, sign), ...) in counterclockwise order
    ends: tuple  # per 1-cell: (head, tail)
    handedness: tuple  # per 1-cell: ((2-cell, slot, "right" | "left"), ...)
    straight: tuple  # per 1-cell: lies on a line
    seed: int | None = None
    geom: object = field(default=None, repr=False)  # construction data for cochain_system
    flips: tuple | None = None  # 1D orientation flips

    @property
    def hyperplane_ok(self) -> bool:
        return all(self.straight)


@dataclass
class CochainSystem:
    dimension: int
    c0: int
    c1: int
    c2: int
    delta0: IntMatrix
    delta1: IntMatrix | None
    sigma0: IntMatrix
    sigma1: IntMatrix
    sigma2: IntMatrix | None
    hyperplane: tuple  # per 1-cell flag
    hyperplane_ok: bool

    def check(self) -> None:
        """Exact cochain-complex and naturality identities."""
        if self.sigma1 @ self.delta0 != self.delta0 @ self.sigma0:
            raise ComplexError("sigma1 * delta0 != delta0 * sigma0")
        if self.dimension == 2:
            if not (self.delta1 @ self.delta0).is_zero():
                raise ComplexError("delta1 * delta0 != 0")
            if self.sigma2 @ self.delta1 != self.delta1 @ self.sigma1:
                raise ComplexError("sigma2 * delta1 != delta1 * sigma1")


@dataclass(frozen=True)
class Diagnostics:
    cp: int
    pi: int
    l_pi: int
    ft: int
    l_ft: int

    # the same counts under the alternative formulas, reported alongside
    pi_product: int = 0  # sum over 1-cells of right x left occurrences
    l_pi_corner: int = 0  # corner-adjacent pairs per vertex star minus (components - 1)

    def row(self) -> tuple[int, int, int, int, int]:
        return (self.cp, self.pi, self.l_pi, self.ft, self.l_ft)


class _UF:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _number(keys, uf: _UF) -> tuple[dict, list]:
    """Dense class ids in order of first appearance."""
    ids: dict = {}
    of: dict = {}
    reps = []
    for k in keys:
        r = uf.find(k)
        if r not in ids:
            ids[r] = len(ids)
            reps.append(k)
        of[k] = ids[r]
    return of, reps


# ====================================================================== 1D

@dataclass
class _Geom1:
    cr: CollaredRule
    vclass: dict  # (tile, "L" | "R") -> 0-cell


def _build_1d(cr: CollaredRule) -> tuple[list, Incidence]:
    n = len(cr.tiles)
    uf = _UF()
    for i in range(n):
        for nb in cr.neighborhoods[i]:
            (l, _), _, (r, _) = sorted(nb, key=lambda t: t[1])
            uf.union((l, "R"), (i, "L"))
            uf.union((i, "R"), (r, "L"))
    keys = [(i, "R") for i in range(n)] + [(i, "L") for i in range(n)]
    vclass, _ = _number(keys, uf)
    nv = len(set(vclass.values()))
    names = cr.names()
    cells = [Cell(1, i, names[i]) for i in range(n)] + [Cell(0, v, f"v{v}") for v in range(nv)]
    ends = tuple((vclass[(i, "R")], vclass[(i, "L")]) for i in range(n))
    inc = Incidence(1, (), ends, (), tuple(True for _ in range(n)), None, _Geom1(cr, vclass))
    return cells, inc


def _cochains_1d(inc: Incidence, flips: list[int]) -> CochainSystem:
    geom: _Geom1 = inc.geom
    cr = geom.cr
    n = len(cr.tiles)
    nv = 1 + max(geom.vclass.values())
    d0 = [[0] * nv for _ in range(n)]
    for i, (h, t) in enumerate(inc.ends):
        d0[i][h] += flips[i]
        d0[i][t] -= flips[i]
    s1 = [[0] * n for _ in range(n)]
    for i, kids in enumerate(cr.children):
        for j, _ in kids:
            s1[i][j] += flips[i] * flips[j]
    s0: dict = {}
    for i, kids in enumerate(cr.children):
        for side, child in (("R", kids[-1][0]), ("L", kids[0][0])):
            v, w = geom.vclass[(i, side)], geom.vclass[(child, side)]
            if s0.setdefault(v, w) != w:
                raise ComplexError("substitution of a 0-cell is not well defined")
    sigma0 = [[0] * nv for _ in range(nv)]
    for v, w in s0.items():
        sigma0[v][w] = 1
    return CochainSystem(1, nv, n, 0, IntMatrix(d0, nv), None, IntMatrix(sigma0, nv), IntMatrix(s1, n), None,
                         inc.straight, True)


# ====================================================================== 2D

@dataclass
class _Arc:
    points: tuple  # polyline, counterclockwise along the owning tile
    member: tuple  # (label, offset) of the neighbour across the arc
    straight: bool


@dataclass
class _Geom2:
    cr: CollaredRule
    arcs: list  # per tile: [_Arc, ...] in boundary order
    zero_points: list  # per tile: [point, ...] (0-cell points on the boundary)
    eclass: dict  # (tile, arc) -> 1-cell
    vclass: dict  # (tile, point) -> 0-cell
    sign: dict  # (tile, arc) -> +1 / -1, before random flips
    stars: set  # distinct vertex stars
    star_pairs: int  # corner-adjacent pairs summed over stars, minus components
    pairs: set  # distinct legal pairs of arc occurrences glued across a 1-cell


def _boundary(rule, tile) -> tuple[list, list]:
    """Arcs and 0-cell points of one collared tile."""
    core = rule.shapes[tile.core]
    others = [(lab, q, g.translate(rule.shapes[lab], q)) for lab, q in tile.collar if not _is_zero(q) or lab != tile.core]
    allpolys = [core] + [p for _, _, p in others]
    pts, nbr = [], []
    for a, b in g.edges(core):
        cuts = [a, b]
        for _, _, p in others:
            for v in p:
                if g.on_segment(v, a, b):
                    cuts.append(v)
        cuts = g.sort_along(cuts, a, b)
        for p, q in zip(cuts, cuts[1:]):
            mid = g.scale(_HALF, g.add(p, q))
            hit = [(lab, off) for lab, off, poly in others if any(g.on_segment(mid, c, d) for c, d in g.edges(poly))]
            if len(hit) != 1:
                raise ComplexError(f"boundary segment of {tile.core} is shared by {len(hit)} collar tiles")
            pts.append(p)
            nbr.append(hit[0])
    n = len(pts)
    is_v = []
    for p in pts:
        meet = sum(1 for poly in allpolys if g.point_in_polygon(p, poly) == 0)
        is_v.append(meet >= 3)
    if not any(is_v):
        raise ComplexError(f"collared tile over {tile.core} has no boundary vertex")
    start = is_v.index(True)
    arcs, cur, member = [], [pts[start]], None
    for step in range(n):
        k = (start + step) % n
        if member is not None and nbr[k] != member:
            raise ComplexError("neighbour changes along an arc without a vertex")
        member = nbr[k]
        nxt = pts[(k + 1) % n]
        cur.append(nxt)
        if is_v[(k + 1) % n]:
            straight = all(g.orient(cur[0], cur[-1], p) == 0 for p in cur[1:-1])
            arcs.append(_Arc(tuple(cur), member, straight))
            cur, member = [nxt], None
    zeros = [pts[(start + s) % n] for s in range(n) if is_v[(start + s) % n]]
    return arcs, zeros


def _is_zero(q) -> bool:
    return not q[0] and not q[1]


def _build_2d(cr: CollaredRule) -> tuple[list, Incidence]:
    rule = cr.rule
    n = len(cr.tiles)
    arcs, zeros = [], []
    for t in cr.tiles:
        a, z = _boundary(rule, t)
        arcs.append(a)
        zeros.append(z)
    by_ends = [{(a.points[0], a.points[-1]): k for k, a in enumerate(arcs[i])} for i in range(n)]
    zero_sets = [set(z) for z in zeros]
    uf_e, uf_v = _UF(), _UF()
    stars: set = set()
    star_pairs = 0
    pairs: set = set()
    for i in range(n):
        for nb in cr.neighborhoods[i]:
            which = {(cr.tiles[j].core, q): j for j, q in nb}
            for k, a in enumerate(arcs[i]):
                j = which[a.member]
                off = a.member[1]
                key = (g.sub(a.points[-1], off), g.sub(a.points[0], off))
                if key not in by_ends[j]:
                    raise ComplexError("no matching arc on the neighbouring collared tile")
                other = (j, by_ends[j][key])
                uf_e.union((i, k), other)
                pairs.add(((i, k), other) if (i, k) <= other else (other, (i, k)))
            for p in zeros[i]:
                star = []
                for j, q in nb:
                    poly = g.translate(rule.shapes[cr.tiles[j].core], q)
                    if g.point_in_polygon(p, poly) == 0:
                        local = g.sub(p, q)
                        if local not in zero_sets[j]:
                            raise ComplexError("vertex is not a vertex of a neighbouring collared tile")
                        uf_v.union((i, p), (j, local))
                        star.append((j, g.sub(q, p)))
                key = tuple(sorted(star))
                if key not in stars:
                    stars.add(key)
                    star_pairs += _corner_loops(rule, cr, key)
    ekeys = [(i, k) for i in range(n) for k in range(len(arcs[i]))]
    eclass, ereps = _number(ekeys, uf_e)
    vkeys = [(i, p) for i in range(n) for p in zeros[i]]
    vclass, _ = _number(vkeys, uf_v)
    sign = {}
    for i, k in ekeys:
        a = arcs[i][k]
        chord = g.sub(a.points[-1], a.points[0])
        if _is_zero(chord):
            raise ComplexError("closed boundary arc (a loop on one vertex) is not supported")
        sign[(i, k)] = 1 if g.lex_positive(chord) else -1
    ne, nv = len(ereps), 1 + max(vclass.values())
    straight = [True] * ne
    for i, k in ekeys:
        if not arcs[i][k].straight:
            straight[eclass[(i, k)]] = False
    geom = _Geom2(cr, arcs, zeros, eclass, vclass, sign, stars, star_pairs, pairs)
    names = cr.names()
    cells = [Cell(2, i, names[i]) for i in range(n)]
    cells += [Cell(1, e, f"e{e}") for e in range(ne)]
    cells += [Cell(0, v, f"v{v}") for v in range(nv)]
    inc = Incidence(2, (), (), (), tuple(straight), None, geom)
    return cells, _orient_2d(inc, [1] * ne)


def _corner_loops(rule, cr, star: tuple) -> int:
    """Corner-adjacent pairs in a vertex star minus (components - 1)."""
    polys = [g.translate(rule.shapes[cr.tiles[j].core], q) for j, q in star]
    m = len(polys)
    pairs = 0
    uf = _UF()
    for a in range(m):
        uf.find(a)
        for b in range(a + 1, m):
            if g.polygons_share_edge(polys[a], polys[b]):
                pairs += 1
                uf.union(a, b)
    comps = len({uf.find(a) for a in range(m)})
    return pairs - (comps - 1)


def _orient_2d(inc: Incidence, flips: list[int]) -> Incidence:
    geom: _Geom2 = inc.geom
    n = len(geom.arcs)
    ne = len(inc.straight)
    boundary = []
    ends: list = [None] * ne
    hand: list = [[] for _ in range(ne)]
    for i in range(n):
        row = []
        for k, a in enumerate(geom.arcs[i]):
            e = geom.eclass[(i, k)]
            s = geom.sign[(i, k)] * flips[e]
            row.append((e, s))
            # counterclockwise traversal agrees with the 1-cell: the tile lies on its left
            hand[e].append((i, k, "left" if s > 0 else "right"))
            start, end = geom.vclass[(i, a.points[0])], geom.vclass[(i, a.points[-1])]
            he = (end, start) if s > 0 else (start, end)
            if ends[e] is None:
                ends[e] = he
            elif ends[e] != he:
                raise ComplexError(f"1-cell e{e} has inconsistent end points")
        boundary.append(tuple(row))
    return Incidence(2, tuple(boundary), tuple(ends), tuple(tuple(h) for h in hand), inc.straight, inc.seed, geom,
                     tuple(flips))


def _cochains_2d(inc: Incidence) -> CochainSystem:
    geom: _Geom2 = inc.geom
    cr = geom.cr
    rule = cr.rule
    e_mat = rule.expansion
    n, ne = len(geom.arcs), len(inc.ends)
    nv = 1 + max(geom.vclass.values())
    d0 = [[0] * nv for _ in range(ne)]
    for e, (h, t) in enumerate(inc.ends):
        d0[e][h] += 1
        d0[e][t] -= 1
    d1 = [[0] * ne for _ in range(n)]
    occ_sign = {}
    for i, row in enumerate(inc.boundary):
        for k, (e, s) in enumerate(row):
            d1[i][e] += s
            occ_sign[(i, k)] = s

    s1_rows: dict = {}
    s0: dict = {}
    for i in range(n):
        kids = cr.children[i]
        present = {(cr.tiles[j].core, s) for j, s in kids}
        # boundary arcs of the substituted tile, grouped by the parent arc they subdivide
        big = [tuple(g.apply(e_mat, p) for p in a.points) for a in geom.arcs[i]]
        images = [dict() for _ in big]
        for j, s in kids:
            for b, arc in enumerate(geom.arcs[j]):
                lab, off = arc.member
                if (lab, g.add(s, off)) in present:
                    continue
                p0, p1 = g.add(arc.points[0], s), g.add(arc.points[1], s)
                mid = g.scale(_HALF, g.add(p0, p1))
                host = [k for k, poly in enumerate(big) if any(g.on_segment(mid, x, y) for x, y in zip(poly, poly[1:]))]
                if len(host) != 1:
                    raise ComplexError("child boundary arc does not lie on a single parent arc")
                f = geom.eclass[(j, b)]
                images[host[0]][f] = images[host[0]].get(f, 0) + occ_sign[(j, b)]
        for k in range(len(big)):
            e = geom.eclass[(i, k)]
            row = {f: occ_sign[(i, k)] * c for f, c in images[k].items() if c}
            if s1_rows.setdefault(e, row) != row:
                raise ComplexError(f"substitution of 1-cell e{e} depends on the occurrence")
        for p in geom.zero_points[i]:
            v = geom.vclass[(i, p)]
            q = g.apply(e_mat, p)
            targets = set()
            for j, s in kids:
                local = g.sub(q, s)
                if (j, local) in geom.vclass:
                    targets.add(geom.vclass[(j, local)])
            if len(targets) != 1:
                raise ComplexError("substituted vertex is not a single vertex")
            w = targets.pop()
            if s0.setdefault(v, w) != w:
                raise ComplexError(f"substitution of 0-cell v{v} depends on the occurrence")
    s1 = [[0] * ne for _ in range(ne)]
    for e, row in s1_rows.items():
        for f, c in row.items():
            s1[e][f] = c
    sg0 = [[0] * nv for _ in range(nv)]
    for v, w in s0.items():
        sg0[v][w] = 1
    return CochainSystem(2, nv, ne, n, IntMatrix(d0, nv), IntMatrix(d1, ne), IntMatrix(sg0, nv), IntMatrix(s1, ne),
                         collared_matrix(cr), inc.straight, inc.hyperplane_ok)


# ====================================================================== API

def build_complex(cr: CollaredRule) -> tuple[list, Incidence]:
    """Cells and incidences of the collared complex, canonically oriented."""
    if cr.rule.dimension == 1:
        return _build_1d(cr)
    return _build_2d(cr)


def orient(cells: list, inc: Incidence, seed: int | None = None) -> Incidence:
    """Canonical orientation, or a seeded random flip of every 1-cell's direction."""
    n1 = sum(1 for c in cells if c.dim == 1)
    flips = [1] * n1
    if seed is not None:
        rng = random.Random(seed)
        flips = [rng.choice((1, -1)) for _ in range(n1)]
    if inc.dimension == 1:
        ends = tuple((h, t) if f > 0 else (t, h) for (h, t), f in zip(_ends_1d(inc), flips))
        return Incidence(1, (), ends, (), inc.straight, seed, inc.geom, tuple(flips))
    return _orient_2d(Incidence(2, (), (), (), inc.straight, seed, inc.geom), flips)


def _ends_1d(inc: Incidence) -> tuple:
    geom: _Geom1 = inc.geom
    return tuple((geom.vclass[(i, "R")], geom.vclass[(i, "L")]) for i in range(len(geom.cr.tiles)))


def cochain_system(cells: list, inc: Incidence, cr: CollaredRule | None = None) -> CochainSystem:
    if inc.dimension == 1:
        flips = inc.flips or (1,) * len(inc.ends)
        cs = _cochains_1d(Incidence(1, (), _ends_1d(inc), (), inc.straight, inc.seed, inc.geom), flips)
    else:
        cs = _cochains_2d(inc)
    cs.check()
    return cs


def diagnostics(cells: list, inc: Incidence) -> Diagnostics:
    n = {d: sum(1 for c in cells if c.dim == d) for d in (0, 1, 2)}
    if inc.dimension == 1:
        return Diagnostics(n[1], 0, 0, n[0], 0)
    product = 0
    for hand in inc.handedness:
        r = sum(1 for x in hand if x[2] == "right")
        product += r * (len(hand) - r)
    geom: _Geom2 = inc.geom
    return Diagnostics(n[2], len(geom.pairs), len(geom.stars), n[1], n[0], product, geom.star_pairs)


def dump_complex(cells: list, inc: Incidence, cs: CochainSystem, diag: Diagnostics) -> dict:
    """JSON-ready description of the complex (schema "apkt-complex/1")."""
    return {
        "schema": "apkt-complex/1",
        "dimension": inc.dimension,
        "cells": {str(d): [c.label for c in cells if c.dim == d] for d in range(inc.dimension + 1)},
        "boundary": [[[e, s] for e, s in row] for row in inc.boundary],
        "ends": [[h, t] for h, t in inc.ends],
        "handedness": [[[i, k, h] for i, k, h in row] for row in inc.handedness],
        "hyperplane": list(cs.hyperplane),
        "hyperplane_ok": cs.hyperplane_ok,
        "matrices": {
            name: m.tolist()
            for name, m in (("delta0", cs.delta0), ("delta1", cs.delta1), ("sigma0", cs.sigma0),
                            ("sigma1", cs.sigma1), ("sigma2", cs.sigma2))
            if m is not None
        },
        "diagnostics": dict(zip(("cp", "pi", "l_pi", "ft", "l_ft"), diag.row()),
                            pi_product=diag.pi_product, l_pi_corner=diag.l_pi_corner),
    }


def dumps_complex(*args) -> str:
    return json.dumps(dump_complex(*args), sort_keys=False, separators=(",", ":")) + "\n"
