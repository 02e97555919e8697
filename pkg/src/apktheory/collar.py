"""Collared prototiles and the induced collared substitution.

A collar is every tile whose closed support meets the core (vertex contacts
included). Collared tiles are read off 2-collared patches (the core, its
neighbours and theirs). Those patches are closed under substitution, since
the 2-collar of a child lies inside the substituted 2-collar of its parent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactlin import IntMatrix
from .substitution import RuleError, SubstitutionRule, adjacency_closure, contacts_by_label
from .substitution import geometry as g


@dataclass(frozen=True)
class CollaredTile:
    core: str
    collar: tuple  # sorted ((label, offset), ...), the core itself at offset zero

    def name(self) -> str:
        if isinstance(self.collar[0][1], int):
            left = [lab for lab, o in self.collar if o == -1]
            right = [lab for lab, o in self.collar if o == 1]
            return f"({''.join(left)}){self.core}({''.join(right)})"
        return self.core


@dataclass
class CollaredRule:
    rule: SubstitutionRule
    tiles: tuple  # CollaredTile, canonical order
    children: tuple  # per tile: ((tile index, translation), ...) in the rule's child order
    neighborhoods: tuple  # per tile: sorted tuple of distinct ((tile index, offset), ...) collars
    power: int = 1
    patches: int = 0  # number of 2-collared patches found

    def names(self) -> list[str]:
        if self.rule.dimension == 1:
            return [t.name() for t in self.tiles]
        counts: dict = {}
        out = []
        for t in self.tiles:
            k = counts.get(t.core, 0)
            counts[t.core] = k + 1
            out.append(f"{t.core}.{k}")
        return out

    @property
    def index(self) -> dict:
        return {t: i for i, t in enumerate(self.tiles)}


def collared_matrix(cr: CollaredRule) -> IntMatrix:
    """Row i counts the collared labels among the children of collared tile i."""
    n = len(cr.tiles)
    rows = [[0] * n for _ in range(n)]
    for i, kids in enumerate(cr.children):
        for j, _ in kids:
            rows[i][j] += 1
    return IntMatrix(rows, n)


def collar_rule(rule: SubstitutionRule, max_patches: int = 200_000) -> CollaredRule:
    if rule.dimension == 1:
        return _collar_1d(rule, max_patches)
    return _collar_2d(rule, max_patches)


# ------------------------------------------------------------------ 1D

def _collar_1d(rule: SubstitutionRule, cap: int) -> CollaredRule:
    sub = rule.children
    seen: set = set()
    todo: list = []
    for lab in rule.labels:
        w: Sequence = (lab,)
        for _ in range(64):
            if len(w) >= 5:
                break
            w = tuple(c for x in w for c in sub[x])
        # keep substituting until every letter has shown up in the interior
        for _ in range(4):
            w = tuple(c for x in w for c in sub[x])
            for k in range(len(w) - 4):
                f = tuple(w[k:k + 5])
                if f not in seen:
                    seen.add(f)
                    todo.append(f)
    while todo:
        v, w, x, y, z = todo.pop()
        big = sub[v] + sub[w]
        start = len(big)
        big = big + sub[x] + sub[y] + sub[z]
        for k in range(start, start + len(sub[x])):
            f = tuple(big[k - 2:k + 3])
            if f not in seen:
                seen.add(f)
                todo.append(f)
                if len(seen) > cap:
                    raise RuleError(f"collar closure exceeded {cap} patches")

    def canon(l, x, r):
        return CollaredTile(x, tuple(sorted(((l, -1), (x, 0), (r, 1)), key=lambda t: t[1])))

    threes = {f[1:4] for f in seen}
    order = sorted(threes, key=lambda t: (t[1], t[0], t[2]))
    tiles = tuple(canon(*t) for t in order)
    idx = {t: i for i, t in enumerate(order)}
    children = []
    for l, x, r in order:
        big = sub[l] + sub[x] + sub[r]
        s = len(sub[l])
        children.append(tuple((idx[tuple(big[k - 1:k + 2])], k - s) for k in range(s, s + len(sub[x]))))
    nbhd: dict = {i: set() for i in range(len(order))}
    for v, w, x, y, z in seen:
        i = idx[(w, x, y)]
        nbhd[i].add(((idx[(v, w, x)], -1), (i, 0), (idx[(x, y, z)], 1)))
    return CollaredRule(rule, tiles, tuple(children), tuple(tuple(sorted(nbhd[i])) for i in range(len(order))),
                        1, len(seen))


# ------------------------------------------------------------------ 2D

class _Reader:
    """Reads collars inside a finite set of placed tiles."""

    def __init__(self, rule: SubstitutionRule):
        self.rule = rule
        self.nbrs = {lab: [(n, o) for n, o, _ in lst] for lab, lst in contacts_by_label(adjacency_closure(rule)).items()}
        self.zero = (rule.zero(), rule.zero())
        # r1 results for the patch last asked about; holding the set keeps its id unique
        self._present: set | None = None
        self._memo: dict = {}

    def r1(self, present: set, lab: str, pos: tuple) -> list:
        if present is not self._present:
            self._present, self._memo = present, {}
        out = self._memo.get((lab, pos))
        if out is None:
            out = [(lab, pos)]
            for n, o in self.nbrs.get(lab, ()):
                q = g.add(pos, o)
                if (n, q) in present:
                    out.append((n, q))
            self._memo[(lab, pos)] = out
        return out

    def r1_key(self, present: set, lab: str, pos: tuple) -> CollaredTile:
        rel = sorted((n, g.sub(q, pos)) for n, q in self.r1(present, lab, pos))
        return CollaredTile(lab, tuple(rel))

    def r2(self, present: set, lab: str, pos: tuple) -> tuple:
        acc = set()
        for n, q in self.r1(present, lab, pos):
            acc.update(self.r1(present, n, q))
        return (lab, tuple(sorted((n, g.sub(q, pos)) for n, q in acc)))


def _touches_boundary(rule: SubstitutionRule, lab: str, pos: tuple, big_edges: list) -> bool:
    poly = g.translate(rule.shapes[lab], pos)
    return any(g.segments_intersect(a, b, c, d) for a, b in g.edges(poly) for c, d in big_edges)


def _seed_patches(rule: SubstitutionRule, rd: _Reader) -> set:
    seeds: set = set()
    e = rule.expansion
    for lab in rule.labels:
        z = rd.zero
        tiles = ((lab, z),)
        poly = rule.shapes[lab]
        found = False
        for k in range(1, 9):
            tiles = tuple((c, g.add(g.apply(e, t), s)) for l, t in tiles for c, s in rule.children[l])
            poly = tuple(g.apply(e, v) for v in poly)
            if len(tiles) < 9:
                continue
            present = set(tiles)
            big_edges = g.edges(poly)
            near: dict = {}

            def on_bd(l, t):
                key = (l, t)
                if key not in near:
                    near[key] = _touches_boundary(rule, l, t, big_edges)
                return near[key]

            for l, t in tiles:
                if on_bd(l, t):
                    continue
                if any(on_bd(n, q) for n, q in rd.r1(present, l, t)):
                    continue
                seeds.add(rd.r2(present, l, t))
                found = True
            if found:
                break
        if not found:
            raise RuleError(f"no interior 2-collared patch found in supertiles of {lab!r}")
    return seeds


def _collar_2d(rule: SubstitutionRule, cap: int) -> CollaredRule:
    rd = _Reader(rule)
    e = rule.expansion
    seen = _seed_patches(rule, rd)
    todo = list(seen)
    while todo:
        core, members = todo.pop()
        kids = [(c, g.add(g.apply(e, t), s)) for l, t in members for c, s in rule.children[l]]
        present = set(kids)
        for c, s in rule.children[core]:
            p = rd.r2(present, c, s)
            if p not in seen:
                seen.add(p)
                todo.append(p)
                if len(seen) > cap:
                    raise RuleError(f"collar closure exceeded {cap} patches")

    # collared tiles, their children, and the collars of their neighbours
    tiles_set: set = set()
    info: dict = {}
    for core, members in seen:
        present = set(members)
        ck = rd.r1_key(present, core, rd.zero)
        tiles_set.add(ck)
        nb = tuple((rd.r1_key(present, n, q), q) for n, q in ck.collar)
        info.setdefault(ck, set()).add(nb)
    tiles = tuple(sorted(tiles_set, key=lambda t: (t.core, t.collar)))
    idx = {t: i for i, t in enumerate(tiles)}
    children = []
    for t in tiles:
        kids = [(c, g.add(g.apply(e, q), s)) for l, q in t.collar for c, s in rule.children[l]]
        present = set(kids)
        row = []
        for c, s in rule.children[t.core]:
            k = rd.r1_key(present, c, s)
            if k not in idx:
                raise RuleError("collared substitution is not closed (a child collar is missing)")
            row.append((idx[k], s))
        children.append(tuple(row))
    nbhd = []
    for t in tiles:
        out = set()
        for nb in info[t]:
            if any(k not in idx for k, _ in nb):
                raise RuleError("a neighbouring collar is missing from the collared set")
            out.add(tuple(sorted((idx[k], q) for k, q in nb)))
        nbhd.append(tuple(sorted(out)))
    return CollaredRule(rule, tiles, tuple(children), tuple(nbhd), 1, len(seen))


def dump_collared(cr: CollaredRule) -> dict:
    """Collared prototiles with their collar patches in the rule-file geometry format."""
    from .substitution.rule import _num_out

    rule = cr.rule
    out = []
    for name, t in zip(cr.names(), cr.tiles):
        item: dict = {"label": name, "core": t.core}
        if rule.dimension == 1:
            item["collar"] = [lab for lab, _ in t.collar]
        else:
            item["collar"] = [
                {"label": lab, "translation": [_num_out(x) for x in q]} for lab, q in t.collar
            ]
        out.append(item)
    return {"rule": rule.name, "cp": len(cr.tiles), "power": cr.power, "collared_prototiles": out}
