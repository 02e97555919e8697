"""Patches, iterated substitution and the closure of legal contacts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import geometry as g
from .rule import RuleError, SubstitutionRule


@dataclass(frozen=True)
class Patch:
    """Placed tiles, each a (label, translation) pair."""

    tiles: tuple

    @classmethod
    def single(cls, rule: SubstitutionRule, label: str) -> "Patch":
        z = rule.zero()
        return cls(((label, (z, z)),))

    def canonical(self, rule: SubstitutionRule) -> "Patch":
        """Translate so the lexicographically least vertex sits at the origin."""
        least = None
        for lab, t in self.tiles:
            for v in rule.shapes[lab]:
                p = g.add(v, t)
                if least is None or g.lex_less(p, least):
                    least = p
        shifted = [(lab, g.sub(t, least)) for lab, t in self.tiles]
        return Patch(tuple(sorted(shifted, key=lambda lt: (lt[0], lt[1]))))

    def polygons(self, rule: SubstitutionRule) -> list[tuple]:
        return [g.translate(rule.shapes[lab], t) for lab, t in self.tiles]

    def area2(self, rule: SubstitutionRule):
        acc = 0
        for lab, _ in self.tiles:
            acc = acc + g.signed_area2(rule.shapes[lab])
        return acc


def substitute(rule: SubstitutionRule, patch, n: int = 1):
    """Level-n subdivision of the expanded patch.

    For 1D rules the patch is a word (string or tuple of labels) and a word of
    the same kind comes back.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if rule.dimension == 1:
        as_str = isinstance(patch, str)
        word = tuple(patch)
        for _ in range(n):
            word = tuple(c for x in word for c in rule.children[x])
        return "".join(word) if as_str and all(len(c) == 1 for c in word) else word
    tiles = patch.tiles
    e = rule.expansion
    for _ in range(n):
        tiles = tuple((c, g.add(g.apply(e, t), s)) for lab, t in tiles for c, s in rule.children[lab])
    return Patch(tiles)


@dataclass(frozen=True)
class Contact:
    """Tile ``label`` at the origin touches tile ``neighbor`` placed at ``offset``."""

    label: str
    neighbor: str
    offset: tuple
    kind: str  # "edge" or "vertex"

    def reverse(self) -> "Contact":
        return Contact(self.neighbor, self.label, (-self.offset[0], -self.offset[1]), self.kind)


class TouchOracle:
    """Cached exact touch tests between translated prototiles."""

    def __init__(self, rule: SubstitutionRule):
        self.rule = rule
        self.boxes = {lab: g.fbbox(rule.shapes[lab]) for lab in rule.labels}
        self._cache: dict = {}

    def kind(self, a: str, b: str, offset: tuple) -> str | None:
        """"edge", "vertex" or None for tile a at 0 and tile b at offset."""
        key = (a, b, offset)
        if key in self._cache:
            return self._cache[key]
        ba, bb = self.boxes[a], self.boxes[b]
        ox, oy = float(offset[0]), float(offset[1])
        shifted = (bb[0] + ox, bb[1] + oy, bb[2] + ox, bb[3] + oy)
        res = None
        if g.bbox_near(ba, shifted):
            p = self.rule.shapes[a]
            q = g.translate(self.rule.shapes[b], offset)
            if g.polygons_touch(p, q):
                res = "edge" if g.polygons_share_edge(p, q) else "vertex"
        self._cache[key] = res
        return res


def _touching_pairs(oracle: TouchOracle, left: Sequence, right: Sequence, same: bool):
    for i, (a, ta) in enumerate(left):
        for j, (b, tb) in enumerate(right):
            if same and j <= i:
                continue
            off = g.sub(tb, ta)
            k = oracle.kind(a, b, off)
            if k is not None:
                yield Contact(a, b, off, k)


def adjacency_closure(rule: SubstitutionRule, max_rounds: int = 10_000):
    """All contacts occurring in the tiling, closed under substitution.

    2D: a frozenset of Contacts containing both directions of each contact.
    1D: the frozenset of legal two-letter words.
    """
    if rule.dimension == 1:
        return _closure_1d(rule, max_rounds)
    oracle = TouchOracle(rule)
    found: set = set()
    todo: list = []

    def add(c: Contact):
        for x in (c, c.reverse()):
            if x not in found:
                found.add(x)
                todo.append(x)

    for lab in rule.labels:
        kids = rule.children[lab]
        for c in _touching_pairs(oracle, kids, kids, True):
            add(c)
    rounds = 0
    e = rule.expansion
    while todo:
        rounds += 1
        if rounds > max_rounds * max(1, len(rule.labels)):
            raise RuleError(f"contact closure did not stabilize ({len(found)} contacts so far)")
        c = todo.pop()
        left = rule.children[c.label]
        shift = g.apply(e, c.offset)
        right = [(b, g.add(s, shift)) for b, s in rule.children[c.neighbor]]
        for d in _touching_pairs(oracle, left, right, False):
            add(d)
    return frozenset(found)


def _closure_1d(rule: SubstitutionRule, max_rounds: int):
    found: set = set()
    for lab in rule.labels:
        w = rule.children[lab]
        found.update(zip(w, w[1:]))
    todo = list(found)
    rounds = 0
    while todo:
        rounds += 1
        if rounds > max_rounds:
            raise RuleError(f"two-letter closure did not stabilize ({len(found)} words so far)")
        x, y = todo.pop()
        pair = (rule.children[x][-1], rule.children[y][0])
        if pair not in found:
            found.add(pair)
            todo.append(pair)
    return frozenset(found)


def contacts_by_label(contacts) -> dict:
    """label -> list of (neighbor, offset, kind), in a deterministic order."""
    out: dict = {}
    for c in contacts:
        out.setdefault(c.label, []).append((c.neighbor, c.offset, c.kind))
    for v in out.values():
        v.sort(key=lambda x: (x[0], x[1]))
    return out
