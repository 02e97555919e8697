"""Exact planar geometry over an ordered field (Fraction or FieldElement).

Points are 2-tuples. Nothing here rounds: every predicate is a sign of an
exact expression.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..exactlin.numfield import FieldElement, orient_sign

HALF = Fraction(1, 2)
Vec = tuple  # (x, y)


def sign(x) -> int:
    if hasattr(x, "sign"):
        return x.sign()
    return (x > 0) - (x < 0)


def add(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def scale(k, a: Vec) -> Vec:
    return (k * a[0], k * a[1])


def apply(m, v: Vec) -> Vec:
    """2x2 matrix (row-major nested tuple) times vector."""
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def matmul2(a, b):
    return tuple(tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)) for i in range(2))


def cross(a: Vec, b: Vec):
    return a[0] * b[1] - a[1] * b[0]


def orient(a: Vec, b: Vec, c: Vec) -> int:
    if all(type(x) is FieldElement for x in (a[0], a[1], b[0], b[1], c[0], c[1])):
        return orient_sign(a, b, c)
    return sign(cross(sub(b, a), sub(c, a)))


def signed_area2(poly: Sequence[Vec]):
    """Twice the signed area."""
    n = len(poly)
    acc = 0
    for i in range(n):
        acc = acc + cross(poly[i], poly[(i + 1) % n])
    return acc


def translate(poly: Sequence[Vec], t: Vec) -> tuple:
    return tuple(add(p, t) for p in poly)


def lex_less(a: Vec, b: Vec) -> bool:
    s = sign(a[0] - b[0])
    if s:
        return s < 0
    return sign(a[1] - b[1]) < 0


def lex_positive(v: Vec) -> bool:
    s = sign(v[0])
    return s > 0 or (s == 0 and sign(v[1]) > 0)


def on_segment(p: Vec, a: Vec, b: Vec) -> bool:
    """p lies on the closed segment [a, b]."""
    if orient(a, b, p) != 0:
        return False
    return (sign(p[0] - a[0]) * sign(p[0] - b[0]) <= 0) and (sign(p[1] - a[1]) * sign(p[1] - b[1]) <= 0)


def segments_intersect(a: Vec, b: Vec, c: Vec, d: Vec) -> bool:
    """Closed segments [a,b] and [c,d] meet."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


def segments_cross_properly(a: Vec, b: Vec, c: Vec, d: Vec) -> bool:
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def collinear_overlap(a: Vec, b: Vec, c: Vec, d: Vec) -> bool:
    """Segments are collinear and share a piece of positive length."""
    if orient(a, b, c) != 0 or orient(a, b, d) != 0:
        return False
    # project on the dominant axis of ab
    ax = 0 if sign(a[0] - b[0]) != 0 else 1
    lo1, hi1 = sorted((a[ax], b[ax]), key=_key)
    lo2, hi2 = sorted((c[ax], d[ax]), key=_key)
    lo = lo1 if sign(lo1 - lo2) >= 0 else lo2
    hi = hi1 if sign(hi1 - hi2) <= 0 else hi2
    return sign(hi - lo) > 0


class _Key:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return sign(self.v - other.v) < 0


def _key(x):
    return _Key(x)


def edges(poly: Sequence[Vec]):
    n = len(poly)
    return [(poly[i], poly[(i + 1) % n]) for i in range(n)]


def point_in_polygon(p: Vec, poly: Sequence[Vec]) -> int:
    """1 inside, 0 on the boundary, -1 outside (exact crossing number)."""
    inside = False
    for a, b in edges(poly):
        if on_segment(p, a, b):
            return 0
        ay, by = sign(a[1] - p[1]), sign(b[1] - p[1])
        if (ay > 0) != (by > 0):
            # edge crosses the horizontal line through p; is the crossing right of p?
            o = orient(a, b, p)
            if (by > 0 and o > 0) or (by <= 0 and o < 0):
                inside = not inside
    return 1 if inside else -1


def is_simple(poly: Sequence[Vec]) -> bool:
    n = len(poly)
    es = edges(poly)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges share exactly one endpoint; reject folding back
                a, b = es[i]
                c, d = es[j]
                if collinear_overlap(a, b, c, d):
                    return False
                continue
            if segments_intersect(*es[i], *es[j]):
                return False
    return True


def triangulate(poly: Sequence[Vec]) -> list[tuple[Vec, Vec, Vec]]:
    """Ear clipping of a simple counterclockwise polygon."""
    pts = list(poly)
    # drop collinear vertices, they only create degenerate ears
    changed = True
    while changed and len(pts) > 3:
        changed = False
        for i in range(len(pts)):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            if orient(a, b, c) == 0:
                del pts[i]
                changed = True
                break
    out = []
    while len(pts) > 3:
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            if orient(a, b, c) <= 0:
                continue
            if any(
                point_in_triangle_closed(q, a, b, c)
                for k, q in enumerate(pts)
                if k not in (i - 1 if i else n - 1, i, (i + 1) % n)
            ):
                continue
            out.append((a, b, c))
            del pts[i]
            break
        else:
            raise ValueError("polygon could not be triangulated (not simple?)")
    out.append(tuple(pts))
    return out


def point_in_triangle_closed(p: Vec, a: Vec, b: Vec, c: Vec) -> bool:
    return orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0


def triangles_overlap(t1, t2) -> bool:
    """Open interiors of two counterclockwise triangles intersect (separating axis)."""
    for tri, other in ((t1, t2), (t2, t1)):
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            if all(orient(a, b, q) <= 0 for q in other):
                return False
    return True


def polygons_touch(p: Sequence[Vec], q: Sequence[Vec]) -> bool:
    """Closed polygons with disjoint interiors share at least one point."""
    for a, b in edges(p):
        for c, d in edges(q):
            if segments_intersect(a, b, c, d):
                return True
    return False


def polygons_share_edge(p: Sequence[Vec], q: Sequence[Vec]) -> bool:
    for a, b in edges(p):
        for c, d in edges(q):
            if collinear_overlap(a, b, c, d):
                return True
    return False


def polygon_inside(inner: Sequence[Vec], outer: Sequence[Vec]) -> bool:
    """Closed containment of a simple polygon in a simple polygon."""
    for a, b in edges(inner):
        # cut the edge at every point where it meets the outer boundary
        cuts = [a, b]
        for c, d in edges(outer):
            for p in (c, d):
                if on_segment(p, a, b):
                    cuts.append(p)
            if segments_cross_properly(a, b, c, d):
                return False
        cuts = _sort_along(cuts, a, b)
        for p in cuts:
            if point_in_polygon(p, outer) < 0:
                return False
        for p, q in zip(cuts, cuts[1:]):
            mid = scale(HALF, add(p, q))
            if point_in_polygon(mid, outer) < 0:
                return False
    return True


def _sort_along(points, a, b):
    d = sub(b, a)
    ax = 0 if sign(d[0]) != 0 else 1
    s = sign(d[ax])
    uniq = []
    for p in points:
        if not any(p == q for q in uniq):
            uniq.append(p)
    return sorted(uniq, key=lambda p: _Key(s * (p[ax] - a[ax]) if s > 0 else -(p[ax] - a[ax])))


def sort_along(points, a, b):
    """Distinct points of segment [a, b] ordered from a to b."""
    return _sort_along(points, a, b)


def fbbox(poly: Sequence[Vec]) -> tuple[float, float, float, float]:
    xs = [float(p[0]) for p in poly]
    ys = [float(p[1]) for p in poly]
    return min(xs), min(ys), max(xs), max(ys)


def bbox_near(b1, b2, tol: float = 1e-7) -> bool:
    return not (b1[2] < b2[0] - tol or b2[2] < b1[0] - tol or b1[3] < b2[1] - tol or b2[3] < b1[1] - tol)
