"""Substitution rules: data model, rule-file parsing and validation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping, Sequence

from ..exactlin import FieldElement, FieldSpec, IntMatrix
from . import geometry as g
from ..jsonfmt import compact

FORMAT = "apkt-rule/1"


class RuleError(ValueError):
    """A rule file is malformed or violates a rule invariant."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class RuleSyntaxError(RuleError):
    pass


class NonPrimitiveRule(RuleError):
    pass


@dataclass(frozen=True)
class Prototile1D:
    label: str


@dataclass(frozen=True)
class Prototile2D:
    label: str
    vertices: tuple  # counterclockwise tuple of exact 2-vectors


class SubstitutionRule:
    """A 1D symbolic or 2D polygonal substitution rule (immutable)."""

    def __init__(
        self,
        name: str,
        dimension: int,
        field: FieldSpec,
        prototiles: Sequence,
        children: Mapping[str, Sequence],
        expansion=None,
        scalar_expansion: bool = False,
        primitive: bool = True,
    ):
        self.name = name
        self.dimension = dimension
        self.field = field
        self.prototiles = tuple(prototiles)
        self.labels = tuple(p.label for p in self.prototiles)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.children = {lab: tuple(children[lab]) for lab in self.labels}
        self.expansion = expansion
        self.scalar_expansion = scalar_expansion
        self.primitive = primitive
        if dimension == 2:
            self.shapes = {p.label: p.vertices for p in self.prototiles}

    def __repr__(self) -> str:
        return f"SubstitutionRule({self.name!r}, d={self.dimension}, {len(self.labels)} prototiles)"

    def zero(self):
        return self.field.elem([0]) if self.field.degree > 1 else Fraction(0)

    def num(self, x):
        """Coerce an int/Fraction into this rule's coordinate type."""
        if self.field.degree > 1 and not isinstance(x, FieldElement):
            return self.field.elem([x])
        return x

    def det_expansion(self):
        e = self.expansion
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]

    def abelianization(self) -> IntMatrix:
        """Entry (i, j) counts prototile j among the children of prototile i."""
        n = len(self.labels)
        rows = [[0] * n for _ in range(n)]
        for i, lab in enumerate(self.labels):
            for ch in self.children[lab]:
                c = ch if self.dimension == 1 else ch[0]
                rows[i][self.index[c]] += 1
        return IntMatrix(rows, n)

    def power(self, k: int) -> "SubstitutionRule":
        """The rule for the k-th iterate of the substitution."""
        if k < 1:
            raise ValueError("power must be positive")
        if k == 1:
            return self
        if self.dimension == 1:
            words = {lab: (lab,) for lab in self.labels}
            for _ in range(k):
                words = {lab: tuple(c for x in w for c in self.children[x]) for lab, w in words.items()}
            return SubstitutionRule(f"{self.name}^{k}", 1, self.field, self.prototiles, words,
                                    primitive=self.primitive)
        e = self.expansion
        placed = {lab: ((lab, (self.zero(), self.zero())),) for lab in self.labels}
        ek = ((1, 0), (0, 1))
        for _ in range(k):
            placed = {
                lab: tuple((c, g.add(g.apply(e, t), s)) for x, t in ps for c, s in self.children[x])
                for lab, ps in placed.items()
            }
            ek = g.matmul2(e, ek)
        ek = tuple(tuple(self.num(x) for x in r) for r in ek)
        return SubstitutionRule(f"{self.name}^{k}", 2, self.field, self.prototiles, placed, ek,
                                self.scalar_expansion, self.primitive)


    def restrict(self, labels) -> "SubstitutionRule":
        """The rule on a set of labels closed under taking children."""
        keep = [p for p in self.prototiles if p.label in set(labels)]
        kept = {p.label for p in keep}
        for lab in kept:
            for ch in self.children[lab]:
                c = ch if self.dimension == 1 else ch[0]
                if c not in kept:
                    raise RuleError(f"cannot restrict: {lab!r} has child {c!r} outside the label set")
        kids = {lab: self.children[lab] for lab in kept}
        prim = is_primitive(_sub_abelianization(self, [p.label for p in keep]))
        return SubstitutionRule(self.name, self.dimension, self.field, keep, kids, self.expansion,
                                self.scalar_expansion, prim)


def _sub_abelianization(rule: SubstitutionRule, labels: list) -> IntMatrix:
    pos = [rule.index[lab] for lab in labels]
    return rule.abelianization().submatrix(pos, pos)


def closed_components(rule: SubstitutionRule) -> list[tuple]:
    """Strongly connected label classes that no child leaves, in label order."""
    m = rule.abelianization()
    n = m.rows
    reach = []
    for i in range(n):
        seen, todo = {i}, [i]
        while todo:
            a = todo.pop()
            for b in range(n):
                if m[a, b] and b not in seen:
                    seen.add(b)
                    todo.append(b)
        reach.append(seen)
    out = []
    for i in range(n):
        comp = {j for j in reach[i] if i in reach[j]}
        if reach[i] == comp and min(comp) == i:
            out.append(tuple(rule.labels[j] for j in sorted(comp)))
    return out


def recurrent_part(rule: SubstitutionRule) -> tuple[SubstitutionRule, list, list]:
    """Restrict a non-primitive rule to its closed components.

    Each component must be primitive on its own; labels outside every closed
    component never recur in a tiling and are dropped. Returns the
    restricted rule, the components and the dropped labels.
    """
    comps = closed_components(rule)
    for comp in comps:
        sub = rule.restrict(comp)
        if not sub.primitive:
            raise NonPrimitiveRule(f"closed component {{{', '.join(comp)}}} is not primitive")
        if rule.dimension == 1 and all(len(sub.children[c]) == 1 for c in comp):
            raise NonPrimitiveRule(f"closed component {{{', '.join(comp)}}} does not expand")
    keep = [lab for comp in comps for lab in comp]
    dropped = [lab for lab in rule.labels if lab not in set(keep)]
    restricted = rule.restrict(keep)
    restricted.primitive = False
    return restricted, comps, dropped

# ------------------------------------------------------------------ parsing

def _parse_field(doc: Any) -> FieldSpec:
    if doc is None:
        return FieldSpec.rationals()
    try:
        mp = [int(c) for c in doc["minpoly"]]
        lo, hi = (Fraction(str(x)) for x in doc["interval"])
    except (KeyError, TypeError, ValueError) as exc:
        raise RuleError(f"bad field description: {exc}") from None
    try:
        return FieldSpec(mp, (lo, hi))
    except ValueError as exc:
        raise RuleError(f"bad field: {exc}") from None


def _parse_num(x: Any, field: FieldSpec, where: str):
    try:
        if isinstance(x, list):
            coeffs = [Fraction(str(c)) for c in x]
            if field.degree == 1:
                if len(coeffs) != 1:
                    raise ValueError("rational field takes one coefficient")
                return coeffs[0]
            if len(coeffs) > field.degree:
                raise ValueError("too many coefficients")
            return FieldElement(coeffs, field)
        if isinstance(x, bool) or not isinstance(x, (int, str)):
            raise ValueError(f"expected a number, got {x!r}")
        q = Fraction(str(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise RuleError(f"{where}: {exc}") from None
    return FieldElement([q], field) if field.degree > 1 else q


def _parse_vec(v: Any, field: FieldSpec, where: str) -> tuple:
    if not isinstance(v, list) or len(v) != 2:
        raise RuleError(f"{where}: expected a pair of coordinates")
    return (_parse_num(v[0], field, where), _parse_num(v[1], field, where))


def parse_rule(text: str | bytes, allow_nonprimitive: bool = False) -> SubstitutionRule:
    """Parse and validate a rule file."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RuleSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    return rule_from_dict(doc, allow_nonprimitive=allow_nonprimitive)


def rule_from_dict(doc: Any, allow_nonprimitive: bool = False) -> SubstitutionRule:
    if not isinstance(doc, dict):
        raise RuleError("rule file must hold a single object")
    dim = doc.get("dimension")
    if dim not in (1, 2):
        raise RuleError("dimension must be 1 or 2")
    name = str(doc.get("name", "unnamed"))
    field = _parse_field(doc.get("field"))
    protos = doc.get("prototiles")
    if not isinstance(protos, list) or not protos:
        raise RuleError("prototiles must be a non-empty list")
    labels = []
    for k, p in enumerate(protos):
        lab = p.get("label") if isinstance(p, dict) else None
        if not isinstance(lab, str) or not lab:
            raise RuleError(f"prototiles[{k}]: missing label")
        if lab in labels:
            raise RuleError(f"prototiles[{k}]: duplicate label {lab!r}")
        labels.append(lab)

    if dim == 1:
        words = {}
        for p in protos:
            w = p.get("word")
            if isinstance(w, str):
                w = list(w)
            if not isinstance(w, list) or not w:
                raise RuleError(f"prototile {p['label']!r}: missing replacement word")
            for c in w:
                if c not in labels:
                    raise RuleError(f"prototile {p['label']!r}: unknown letter {c!r} in word")
            words[p["label"]] = tuple(w)
        rule = SubstitutionRule(name, 1, field, [Prototile1D(lab) for lab in labels], words)
    else:
        tiles = []
        for p in protos:
            vs = p.get("vertices")
            if not isinstance(vs, list) or len(vs) < 3:
                raise RuleError(f"prototile {p['label']!r}: needs at least 3 vertices")
            verts = tuple(_parse_vec(v, field, f"prototile {p['label']!r}") for v in vs)
            tiles.append(Prototile2D(p["label"], verts))
        e = doc.get("expansion")
        # a flat list is one field element, a list of rows is a matrix
        scalar = not isinstance(e, list) or not any(isinstance(r, list) for r in e)
        if scalar:
            s = _parse_num(e, field, "expansion")
            z = s - s
            exp = ((s, z), (z, s))
        else:
            if len(e) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in e):
                raise RuleError("expansion must be a scalar or a 2x2 matrix")
            exp = tuple(tuple(_parse_num(x, field, "expansion") for x in r) for r in e)
        kids = doc.get("children")
        if not isinstance(kids, dict):
            raise RuleError("children must map each prototile label to a list")
        children = {}
        for lab in labels:
            lst = kids.get(lab)
            if not isinstance(lst, list) or not lst:
                raise RuleError(f"children[{lab!r}]: missing or empty")
            out = []
            for k, ch in enumerate(lst):
                where = f"children[{lab!r}][{k}]"
                if not isinstance(ch, dict) or ch.get("label") not in labels:
                    raise RuleError(f"{where}: unknown child label {ch.get('label') if isinstance(ch, dict) else ch!r}")
                out.append((ch["label"], _parse_vec(ch.get("translation"), field, where)))
            children[lab] = tuple(out)
        extra = set(kids) - set(labels)
        if extra:
            raise RuleError(f"children given for unknown prototiles {sorted(extra)}")
        rule = SubstitutionRule(name, 2, field, tiles, children, exp, scalar)
        validate_geometry(rule)
    rule.primitive = is_primitive(rule.abelianization())
    if not rule.primitive and not allow_nonprimitive:
        raise NonPrimitiveRule("substitution is not primitive (use --allow-nonprimitive to override)")
    return rule


# --------------------------------------------------------------- validation

def is_primitive(m: IntMatrix) -> bool:
    """Some power strictly positive; Wielandt's bound (n-1)^2+1 is sharp."""
    n = m.rows
    b = [[1 if m[i, j] > 0 else 0 for j in range(n)] for i in range(n)]
    # boolean powers by repeated squaring past the bound
    p = b
    k = 1
    while k < (n - 1) ** 2 + 1:
        p = [[1 if any(p[i][t] and p[t][j] for t in range(n)) else 0 for j in range(n)] for i in range(n)]
        k *= 2
    # A^k > 0 for k >= bound implies all later powers positive; squaring only overshoots
    return all(all(r) for r in p)


def validate_geometry(rule: SubstitutionRule) -> None:
    e = rule.expansion
    d = rule.det_expansion()
    if g.sign(d) <= 0:
        raise RuleError("expansion must have positive determinant")
    # E^T E - I positive definite <=> all singular values > 1
    s00 = e[0][0] * e[0][0] + e[1][0] * e[1][0] - 1
    s11 = e[0][1] * e[0][1] + e[1][1] * e[1][1] - 1
    s01 = e[0][0] * e[0][1] + e[1][0] * e[1][1]
    if g.sign(s00) <= 0 or g.sign(s00 * s11 - s01 * s01) <= 0:
        raise RuleError("expansion is not strictly expanding")
    tris = {}
    for p in rule.prototiles:
        vs = p.vertices
        if len(set(vs)) != len(vs):
            raise RuleError(f"prototile {p.label!r}: repeated vertex")
        if g.sign(g.signed_area2(vs)) <= 0:
            raise RuleError(f"prototile {p.label!r}: vertices must be counterclockwise with nonempty interior")
        if not g.is_simple(vs):
            raise RuleError(f"prototile {p.label!r}: polygon is not simple")
        tris[p.label] = g.triangulate(vs)
    for p in rule.prototiles:
        big = tuple(g.apply(e, v) for v in p.vertices)
        kids = rule.children[p.label]
        placed = []
        area = 0
        for k, (c, t) in enumerate(kids):
            where = f"children[{p.label!r}][{k}] ({c} at {_fmt_vec(t)})"
            poly = g.translate(rule.shapes[c], t)
            if not g.polygon_inside(poly, big):
                raise RuleError(f"{where}: child leaves the expanded prototile")
            ctris = [g.translate(tr, t) for tr in tris[c]]
            box = g.fbbox(poly)
            for j, (box2, tris2) in enumerate(placed):
                if not g.bbox_near(box, box2):
                    continue
                if any(g.triangles_overlap(a, b) for a in ctris for b in tris2):
                    raise RuleError(f"{where}: overlaps child {j} ({kids[j][0]} at {_fmt_vec(kids[j][1])})")
            placed.append((box, ctris))
            area = area + g.signed_area2(rule.shapes[c])
        if area != d * g.signed_area2(p.vertices):
            raise RuleError(f"children[{p.label!r}]: children do not cover the expanded prototile (area mismatch)")


# ------------------------------------------------------------ serializing

def _num_out(x) -> Any:
    if isinstance(x, FieldElement):
        c = [_plain(str(q)) for q in x.c]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        return c[0] if len(c) == 1 else c
    return _plain(str(Fraction(x)))


def _plain(s: str):
    return int(s) if "/" not in s else s


def _fmt_vec(v) -> str:
    return "(" + ", ".join(str(_num_out(x)) for x in v) + ")"


def rule_to_dict(rule: SubstitutionRule) -> dict:
    doc: dict = {"format": FORMAT, "name": rule.name, "dimension": rule.dimension}
    if rule.field.degree > 1:
        doc["field"] = {
            "minpoly": list(rule.field.minpoly),
            "interval": [str(rule.field.interval[0]), str(rule.field.interval[1])],
        }
    if rule.dimension == 1:
        doc["prototiles"] = [{"label": lab, "word": list(rule.children[lab])} for lab in rule.labels]
        return doc
    doc["prototiles"] = [
        {"label": p.label, "vertices": [[_num_out(x) for x in v] for v in p.vertices]} for p in rule.prototiles
    ]
    e = rule.expansion
    doc["expansion"] = _num_out(e[0][0]) if rule.scalar_expansion else [[_num_out(x) for x in r] for r in e]
    doc["children"] = {
        lab: [{"label": c, "translation": [_num_out(x) for x in t]} for c, t in rule.children[lab]]
        for lab in rule.labels
    }
    return doc


def serialize_rule(rule: SubstitutionRule) -> str:
    """Deterministic text; short arrays stay on one line."""
    return compact(rule_to_dict(rule)) + "\n"
