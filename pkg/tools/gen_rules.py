"""Regenerate the shipped rule files from their compact descriptions.

Run from the repository root: python3 tools/gen_rules.py
Writes rules/*.json and the identical builtin copies in src/apktheory/rules/.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))


def rot_hex(v):
    # 60 degree rotation in the basis e1 = (1, 0), e2 = (1/2, sqrt(3)/2)
    return (-v[1], v[0] + v[1])


def half_hex() -> dict:
    """Half-hexagons in skew lattice coordinates, six orientations H0..H5."""
    shapes = [[(0, 0), (2, 0), (1, 1), (0, 1)]]
    for _ in range(5):
        shapes.append([rot_hex(v) for v in shapes[-1]])
    base = [(0, (1, 0)), (2, (4, 0)), (3, (2, 2)), (4, (0, 2))]
    children = {}
    for k in range(6):
        kids = []
        for j, t in base:
            for _ in range(k):
                t = rot_hex(t)
            kids.append({"label": f"H{(j + k) % 6}", "translation": list(t)})
        children[f"H{k}"] = kids
    return {
        "name": "half-hex",
        "dimension": 2,
        "prototiles": [{"label": f"H{k}", "vertices": [list(v) for v in s]} for k, s in enumerate(shapes)],
        "expansion": 2,
        "children": children,
    }


CHAIR_SQUARES = {
    "A": {(0, 0), (1, 0), (0, 1)},  # corner bottom-left
    "B": {(0, 0), (1, 0), (1, 1)},  # corner bottom-right
    "C": {(1, 0), (0, 1), (1, 1)},  # corner top-right
    "D": {(0, 0), (0, 1), (1, 1)},  # corner top-left
}


def _outline(cells: set) -> list:
    """Counterclockwise boundary of a union of unit squares (simply connected)."""
    edges = {}
    for i, j in cells:
        for a, b in (((i, j), (i + 1, j)), ((i + 1, j), (i + 1, j + 1)),
                     ((i + 1, j + 1), (i, j + 1)), ((i, j + 1), (i, j))):
            if (b, a) in edges:
                del edges[(b, a)]
            else:
                edges[(a, b)] = True
    nxt = {a: b for a, b in edges}
    start = min(nxt)
    out, p = [start], nxt[start]
    while p != start:
        out.append(p)
        p = nxt[p]
    # drop collinear points
    res = []
    n = len(out)
    for k in range(n):
        a, b, c = out[k - 1], out[k], out[(k + 1) % n]
        if (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]) != 0:
            res.append(b)
    return res


def _identify(cells: set) -> tuple[str, tuple]:
    i0 = min(i for i, _ in cells)
    j0 = min(j for _, j in cells)
    rel = {(i - i0, j - j0) for i, j in cells}
    for lab, sq in CHAIR_SQUARES.items():
        if sq == rel:
            return lab, (i0, j0)
    raise ValueError(f"not a chair: {sorted(cells)}")


def chair() -> dict:
    # children of A in the doubled 4x4 box, then rotate for B, C, D
    base = [{(0, 0), (1, 0), (0, 1)}, {(1, 1), (2, 1), (1, 2)}, {(2, 0), (3, 0), (3, 1)}, {(0, 2), (0, 3), (1, 3)}]
    children = {}
    order = "ABCD"
    for k, lab in enumerate(order):
        kids = []
        for cells in base:
            for _ in range(k):
                cells = {(3 - j, i) for i, j in cells}
            c, t = _identify(cells)
            kids.append({"label": c, "translation": list(t)})
        children[lab] = kids
    return {
        "name": "chair",
        "dimension": 2,
        "prototiles": [{"label": lab, "vertices": [list(v) for v in _outline(CHAIR_SQUARES[lab])]} for lab in order],
        "expansion": 2,
        "children": children,
    }


def solenoid() -> dict:
    return {
        "name": "solenoid",
        "dimension": 2,
        "prototiles": [{"label": "S", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}],
        "expansion": 2,
        "children": {"S": [{"label": "S", "translation": list(t)} for t in ((0, 0), (1, 0), (0, 1), (1, 1))]},
    }


class Decagonal:
    """Exact plane geometry in Q(t), t = 2 sin 36 deg, t^4 - 5t^2 + 5 = 0.

    Unit vectors along multiples of 36 deg have coordinates in this field,
    and phi = 3 - t^2.
    """

    def __init__(self):
        from fractions import Fraction

        from apktheory.exactlin import FieldSpec

        self.field = FieldSpec((5, 0, -5, 0, 1), (Fraction(11, 10), Fraction(6, 5)))
        t = self.field.gen()
        self.phi = 3 - t * t
        self.zero = self.field.elem([0])
        self.origin = (self.zero, self.zero)
        cos, sin = self.phi / 2, t / 2
        self.units = [(self.field.elem([1]), self.zero)]
        for _ in range(9):
            x, y = self.units[-1]
            self.units.append((cos * x - sin * y, sin * x + cos * y))

    def scale(self, k, v):
        return (k * v[0], k * v[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def lerp(self, a, b, k):
        return (a[0] + k * (b[0] - a[0]), a[1] + k * (b[1] - a[1]))

    def cross(self, a, b):
        return a[0] * b[1] - a[1] * b[0]

    def direction(self, v) -> int:
        return next(k for k, u in enumerate(self.units)
                    if self.cross(u, v) == 0 and u[0] * v[0] + u[1] * v[1] > 0)

    def num(self, x):
        return [q.numerator if q.denominator == 1 else str(q) for q in x.c]

    def vec(self, v):
        return [self.num(v[0]), self.num(v[1])]

    def triangle_rule(self, name, shapes, subdivide) -> dict:
        """shapes: label -> (kind, b, c, hand) with apex at the origin.

        subdivide(kind, hand, a, b, c) gives (label, apex) children of the
        triangle a, b, c already scaled by phi.
        """
        protos, children = [], {}
        for lab, (kind, b, c, hand) in shapes.items():
            verts = [self.origin, b, c] if self.cross(b, c) > 0 else [self.origin, c, b]
            protos.append({"label": lab, "vertices": [self.vec(v) for v in verts]})
            kids = subdivide(kind, hand, self.origin, self.scale(self.phi, b), self.scale(self.phi, c))
            children[lab] = [{"label": k, "translation": self.vec(apex)} for k, apex in kids]
        return {
            "name": name,
            "dimension": 2,
            "field": {"minpoly": list(self.field.minpoly), "interval": ["11/10", "6/5"]},
            "prototiles": protos,
            "expansion": self.num(self.phi),
            "children": children,
        }

    def label(self, prefix, a, b, c, hand=None):
        """Name of a triangle with apex a: prefix, direction of the first ccw edge, hand."""
        vb, vc = self.sub(b, a), self.sub(c, a)
        first = vb if self.cross(vb, vc) > 0 else vc
        if hand is None:
            hand = "L" if self.cross(vb, vc) > 0 else "R"
        return f"{prefix}{self.direction(first)}{hand}"


def robinson() -> dict:
    """Robinson triangles as halves of the Penrose rhombs: thin (T) and thick (H)."""
    g = Decagonal()
    phi, u = g.phi, g.units

    def pieces(kind, a, b, c):
        if kind == "T":
            p = g.lerp(a, b, 1 / phi)
            return [("T", c, p, b), ("H", p, c, a)]
        q, r = g.lerp(b, a, 1 / phi), g.lerp(b, c, 1 / phi)
        return [("H", r, c, a), ("H", q, r, b), ("T", r, q, a)]

    # the handedness of a, b, c is part of the tile; close up from one thin tile
    shapes, todo = {}, [("T", u[0], u[1]), ("T", u[1], u[0])]
    while todo:
        kind, b, c = todo.pop()
        lab = g.label(kind, g.origin, b, c)
        if lab in shapes:
            continue
        shapes[lab] = (kind, b, c, lab[-1])
        for k, a2, b2, c2 in pieces(kind, g.origin, g.scale(phi, b), g.scale(phi, c)):
            todo.append((k, g.sub(b2, a2), g.sub(c2, a2)))
    shapes = {lab: shapes[lab] for lab in sorted(shapes, key=lambda x: (x[0], int(x[1:-1]), x[-1]))}

    def subdivide(kind, hand, a, b, c):
        return [(g.label(k, a2, b2, c2), a2) for k, a2, b2, c2 in pieces(kind, a, b, c)]

    return g.triangle_rule("robinson", shapes, subdivide)


def tuebingen() -> dict:
    """Tuebingen triangles: golden triangles (A, apex 36 deg, legs phi, base 1) and
    gnomons (B, apex 108 deg, legs 1, base phi), ten rotations, two decorations.

    The L rule is drawn on the apex x and the base corners y, z taken
    counterclockwise; the R rule is its mirror image in the tile's axis, with
    every decoration flipped.
    """
    g = Decagonal()
    phi, u = g.phi, g.units
    flip = {"L": "R", "R": "L"}
    shapes = {}
    for prefix, b0, c0 in (("A", g.scale(phi, u[0]), g.scale(phi, u[1])), ("B", u[0], u[3])):
        for k in range(10):
            b, c = b0, c0
            for _ in range(k):
                b, c = rotate(g, b), rotate(g, c)
            for hand in "LR":
                shapes[g.label(prefix, g.origin, b, c, hand)] = (prefix, b, c, hand)

    def subdivide(kind, hand, x, y, z):
        if g.cross(g.sub(y, x), g.sub(z, x)) < 0:
            y, z = z, y
        if hand == "R":
            y, z = z, y
        other = flip[hand]
        if kind == "A":
            p, q = g.lerp(x, z, 1 / phi), g.lerp(x, y, 1 / phi)
            kids = [("A", y, z, p, hand), ("A", x, q, p, other), ("B", q, y, p, hand)]
        else:
            p = g.lerp(y, z, 1 / phi)
            kids = [("A", y, p, x, other), ("B", p, z, x, hand)]
        return [(g.label(k, a, b, c, h), a) for k, a, b, c, h in kids]

    return g.triangle_rule("tuebingen", shapes, subdivide)


def rotate(g: Decagonal, v):
    c, s = g.units[1]
    return (c * v[0] - s * v[1], s * v[0] + c * v[1])


def word_rule(name: str, words: dict) -> dict:
    return {
        "name": name,
        "dimension": 1,
        "prototiles": [{"label": k, "word": list(w)} for k, w in words.items()],
    }


RULES = {
    "fibonacci": lambda: word_rule("fibonacci", {"a": "b", "b": "ab"}),
    "silver-mean": lambda: word_rule("silver-mean", {"a": "b", "b": "bab"}),
    "solenoid": solenoid,
    "half-hex": half_hex,
    "chair": chair,
    "robinson": robinson,
    "tuebingen": tuebingen,
}


def main() -> None:
    from apktheory.substitution import rule_from_dict, serialize_rule

    out_dirs = [ROOT / "rules", ROOT / "src" / "apktheory" / "rules"]
    for d in out_dirs:
        d.mkdir(parents=True, exist_ok=True)
    extra = sorted(p.name for p in (ROOT / "rules").glob("*.json") if p.stem not in RULES)
    for name, make in RULES.items():
        text = serialize_rule(rule_from_dict(json.loads(json.dumps(make()))))
        (ROOT / "rules" / f"{name}.json").write_text(text, encoding="utf-8")
    # hand-written rule files are copied verbatim
    for fname in sorted(p.name for p in (ROOT / "rules").glob("*.json")):
        shutil.copyfile(ROOT / "rules" / fname, out_dirs[1] / fname)
    print(f"wrote {len(RULES)} generated rules; copied {len(extra)} others")


if __name__ == "__main__":
    main()
