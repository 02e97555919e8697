"""K-theory of the unstable groupoid from the cochain towers.

d = 1:  K0(u) = coker(ev), K1(u) = ker(ev), ev = delta0 from the 0-cell tower
        (relative K0) to the 1-cell tower (K0 of the AF algebra).
d = 2:  ev = delta1 on C1/im delta0; H2 = coker, H1 = ker, H0 = lim ker delta0;
        K0(u) = H2 ⊕ H0, K1(u) = H1, relative K1 = H0.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .abgroups import (
    CLASSIFIED,
    LimitGroup,
    PresentedGroup,
    StationarySystem,
    SystemMap,
    classify_limit,
    direct_sum,
    limit_cokernel,
    limit_kernel,
    remove_eventual_kernel,
)
from .apcomplex import CochainSystem, Diagnostics
from .jsonfmt import compact
from .exactlin import IntMatrix, char_poly_factor, det, kernel_basis, matrix_poly
from .exactlin.poly import ppow

SCHEMA = "apkt-report/1"
GROUP_KEYS = ("k0_af", "k0_af_u", "k0_u", "k1_u", "k1_af_u", "h0", "h1", "h2", "k0_af1")


@dataclass
class KTheoryReport:
    rule: str
    dimension: int
    diagnostics: Diagnostics
    groups: dict  # name -> LimitGroup (see GROUP_KEYS)
    ev: dict  # description of the evaluation map
    flags: dict
    presentations: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return all(g.status == CLASSIFIED for g in self.groups.values())

    def __getattr__(self, name):
        groups = self.__dict__.get("groups", {})
        if name in groups:
            return groups[name]
        raise AttributeError(name)

    def to_dict(self) -> dict:
        d = self.diagnostics
        return {
            "schema": SCHEMA,
            "rule": self.rule,
            "dimension": self.dimension,
            "diagnostics": {"cp": d.cp, "pi": d.pi, "l_pi": d.l_pi, "ft": d.ft, "l_ft": d.l_ft,
                            "pi_product": d.pi_product, "l_pi_corner": d.l_pi_corner},
            "groups": {k: g.to_dict() for k, g in self.groups.items()},
            "ev": self.ev,
            "flags": self.flags,
            "presentations": self.presentations,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "KTheoryReport":
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {doc.get('schema')!r}")
        dg = doc["diagnostics"]
        diag = Diagnostics(dg["cp"], dg["pi"], dg["l_pi"], dg["ft"], dg["l_ft"], dg["pi_product"], dg["l_pi_corner"])
        groups = {k: LimitGroup.from_dict(v) for k, v in doc["groups"].items()}
        return cls(doc["rule"], doc["dimension"], diag, groups, doc["ev"], doc["flags"], doc["presentations"])


# ------------------------------------------------------------------ helpers

class _Ctx:
    def __init__(self, verify: str, budget: float | None):
        self.verify = verify
        self.deadline = time.monotonic() + budget if budget else None

    def classify(self, s: StationarySystem) -> LimitGroup:
        return classify_limit(s, verify=self.verify, deadline=self.deadline)


def _stable_rank(m: IntMatrix) -> int:
    return remove_eventual_kernel(StationarySystem.free(m)).n


def _image_rank(f: SystemMap, ctx: _Ctx) -> int:
    src = remove_eventual_kernel(f.source).n
    ker = remove_eventual_kernel(limit_kernel(f)).n
    return src - ker


def _splitting_flags(groups: dict) -> dict:
    return {k: g.splitting for k, g in groups.items()}


# ---------------------------------------------------------------- d = 1

def compute_d1(cs: CochainSystem, rule: str = "", diag: Diagnostics | None = None,
               verify: str = "auto", budget: float | None = None) -> KTheoryReport:
    ctx = _Ctx(verify, budget)
    c0 = StationarySystem.free(cs.sigma0)
    c1 = StationarySystem.free(cs.sigma1)
    ev = SystemMap(c0, c1, cs.delta0)
    g = {
        "k0_af": ctx.classify(c1),
        "k0_af_u": ctx.classify(c0),
        "k0_u": ctx.classify(limit_cokernel(ev)),
        "k1_u": ctx.classify(limit_kernel(ev)),
    }
    g["h0"] = g["k1_u"]
    ev_info = {
        "matrix": "delta0",
        "image_rank": _image_rank(ev, ctx),
        "kernel_rank": g["k1_u"].rank,
        "zero_on_limit": _image_rank(ev, ctx) == 0,
        "eigenbasis": eigenbasis_matrix(cs.delta0, cs.sigma0, cs.sigma1),
    }
    flags = {
        "hyperplane_ok": True,
        "splitting": _splitting_flags(g),
        "components": g["h0"].rank,
        "exactness_ok": _exactness_d1(cs, g),
    }
    pres = {"k0_u": f"{g['k0_af']} / image ev"}
    return KTheoryReport(rule, 1, diag or Diagnostics(cs.c1, 0, 0, cs.c0, 0), g, ev_info, flags, pres)


def _exactness_d1(cs: CochainSystem, g: dict) -> bool:
    return g["k1_u"].rank - g["k0_u"].rank == _stable_rank(cs.sigma0) - _stable_rank(cs.sigma1)


# ---------------------------------------------------------------- d = 2

def compute_d2(cs: CochainSystem, rule: str = "", diag: Diagnostics | None = None,
               verify: str = "auto", budget: float | None = None) -> KTheoryReport:
    ctx = _Ctx(verify, budget)
    c0 = StationarySystem.free(cs.sigma0)
    c1 = StationarySystem.free(cs.sigma1)
    c2 = StationarySystem.free(cs.sigma2)
    d0 = SystemMap(c0, c1, cs.delta0)
    rel = StationarySystem(PresentedGroup(cs.c1, cs.delta0), cs.sigma1)
    ev = SystemMap(rel, c2, cs.delta1)
    g = {
        "k0_af": ctx.classify(c2),
        "k0_af_u": ctx.classify(rel),
        "h2": ctx.classify(limit_cokernel(ev)),
        "h1": ctx.classify(limit_kernel(ev)),
        "h0": ctx.classify(limit_kernel(d0)),
    }
    g["k0_u"] = direct_sum(g["h2"], g["h0"])
    g["k1_u"] = g["h1"]
    g["k1_af_u"] = g["h0"]
    im_d0 = _image_rank(d0, ctx)
    route, af1 = _af1(cs, ctx)
    if af1 is not None:
        g["k0_af1"] = af1
    ev_info = {
        "matrix": "delta1",
        "image_rank": _image_rank(ev, ctx),
        "kernel_rank": g["h1"].rank,
        "delta0_image_rank": im_d0,
    }
    flags = {
        "hyperplane_ok": cs.hyperplane_ok,
        "af1_route": route,
        "splitting": _splitting_flags(g),
        "components": g["h0"].rank,
        "exactness_ok": _exactness_d2(cs, g),
    }
    pres = {
        "k0_u": f"({g['k0_af']}) / image ev ⊕ {g['h0']}",
        "k0_af_u": f"C1 / im delta0, rank {g['k0_af_u'].rank}" + (" (im delta0 = 0)" if im_d0 == 0 else ""),
    }
    if af1 is not None:
        pres["k1_u"] = f"kernel[ {g['k0_af_u']} -> {g['k0_af']} ] inside K0(AF1) = {af1}"
    return KTheoryReport(rule, 2, diag or Diagnostics(cs.c2, 0, 0, cs.c1, cs.c0), g, ev_info, flags, pres)


def _exactness_d2(cs: CochainSystem, g: dict) -> bool:
    lhs = g["h0"].rank - g["h1"].rank + g["h2"].rank
    rhs = _stable_rank(cs.sigma0) - _stable_rank(cs.sigma1) + _stable_rank(cs.sigma2)
    return lhs == rhs


def _af1(cs: CochainSystem, ctx: _Ctx) -> tuple[str, LimitGroup | None]:
    """K0 of the 1-skeleton AF algebra, and by which route it is identified."""
    c1 = StationarySystem.free(cs.sigma1)
    if cs.hyperplane_ok:
        return "hyperplane", ctx.classify(c1)
    lim = ctx.classify(c1)
    factors = char_poly_factor(cs.sigma1)
    integral = all(len(f) == 2 for f, _ in factors)
    if integral and lim.status == CLASSIFIED:
        return "splits-completely", lim
    straight = [i for i, ok in enumerate(cs.hyperplane) if ok]
    if straight:
        block = cs.sigma1.submatrix(straight, straight)
        core = remove_eventual_kernel(StationarySystem.free(block))
        if core.n and abs(det(core.endo)) == 1:
            return "determinant-one", lim
    return "unattributed", None


# ------------------------------------------------------- eigenbasis of ev

def eigenbasis_matrix(m: IntMatrix, src: IntMatrix, tgt: IntMatrix) -> list | None:
    """The map m in eigen-coordinates of src (columns) and tgt (rows).

    Rows run over eigenvalues of tgt by decreasing absolute value. Integral
    eigenvalues use a saturated eigenlattice basis; a non-integral
    eigenvalue gets one row per root, which is only written when the
    image has no component there (otherwise None is returned). Columns are
    the integral eigenvectors of src on its eventual image. If src has a
    negative integral eigenvalue both towers are squared first, which does
    not change the limit.
    """
    if any(lam < 0 for lam, _ in _integral_eigen(src)):
        src, tgt = src @ src, tgt @ tgt
    cols = []
    for lam, basis in _integral_eigen(src):
        if lam != 0:
            cols.extend(basis)
    cols.sort()
    images = [m.apply(c) for c in cols]
    rows_spec = []  # (|lambda| for sorting, kind, data)
    blocks = []
    for f, e in char_poly_factor(tgt):
        if len(f) == 2 and f[0] == 0:
            continue
        ker = [tuple(c) for c in kernel_basis(matrix_poly(ppow(f, e), tgt)).columns()]
        if len(f) == 2:
            ker = [c if _last_nonzero(c) > 0 else tuple(-x for x in c) for c in ker]
        blocks.append((f, e, ker))
    allbasis = [c for _, _, k in blocks for c in k]
    coords = []
    for v in images:
        if not allbasis:
            coords.append([])
            continue
        sol = _solve(allbasis, v)
        if sol is None:
            return None  # image meets the eventual kernel
        coords.append(sol)
    offset = 0
    for f, e, ker in blocks:
        k = len(ker)
        piece = [c[offset:offset + k] for c in coords]
        offset += k
        if len(f) == 2:
            lam = -f[0]
            for r in range(k):
                rows_spec.append((abs(lam), -lam, [piece[j][r] for j in range(len(cols))]))
        else:
            if any(any(x for x in p) for p in piece):
                return None
            for root in _real_roots(f):
                for _ in range(e):
                    rows_spec.append((abs(root), -root, [Fraction(0)] * len(cols)))
    rows_spec.sort(key=lambda t: (-t[0], t[1]))
    return [[_plain(x) for x in row] for _, _, row in rows_spec]


def _solve(cols: list, v) -> list | None:
    """Rational coordinates of v in independent columns, or None."""
    k = len(cols)
    rows = [[Fraction(c[i]) for c in cols] + [Fraction(v[i])] for i in range(len(v))]
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            return None
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    if any(row[k] for row in rows[k:]):
        return None
    return [rows[i][k] for i in range(k)]


def _plain(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def _integral_eigen(m: IntMatrix) -> list:
    out = []
    for f, _ in char_poly_factor(m):
        if len(f) == 2:
            lam = -f[0]
            basis = kernel_basis(m - IntMatrix.identity(m.rows).scale(lam))
            cols = [tuple(c) for c in basis.columns()]
            cols = [c if _last_nonzero(c) > 0 else tuple(-x for x in c) for c in cols]
            out.append((lam, cols))
    return out


def _last_nonzero(c) -> int:
    for x in reversed(c):
        if x:
            return x
    return 0


def _real_roots(f) -> list[float]:
    x = sympy.Symbol("x")
    return sorted(float(r) for r in sympy.Poly(list(reversed(f)), x).real_roots())


# ------------------------------------------------------------------ render

def _fmt_matrix(rows) -> str:
    return "[" + ",".join("[" + ",".join(str(x).replace("-", "−") for x in r) + "]" for r in rows) + "]"


def render_report(r: KTheoryReport, fmt: str = "text") -> str:
    if fmt in ("json", "structured"):
        return compact(r.to_dict()) + "\n"
    d = r.diagnostics
    g = r.groups
    lines = [
        f"rule: {r.rule} (d = {r.dimension})",
        f"CP {d.cp}  PI {d.pi}  L(PI) {d.l_pi}  FT {d.ft}  L(FT) {d.l_ft}",
    ]
    if r.dimension == 2 and (d.pi_product != d.pi or d.l_pi_corner != d.l_pi):
        lines.append(f"  alternative counts: right x left PI {d.pi_product}, corner-loop L(PI) {d.l_pi_corner}")
    lines.append("")
    w = max(len(str(g[k])) for k in ("k0_af_u", "k1_af_u") if k in g) if r.dimension == 2 else 0
    if r.dimension == 1:
        lines += [
            f"K0(AF;u) = {g['k0_af_u']}  --ev-->  K0(AF) = {g['k0_af']}  -->  K0(u) = {g['k0_u']}",
            f"K1(u) = {g['k1_u']}",
        ]
        eb = r.ev.get("eigenbasis")
        if eb is not None:
            lines.append(f"ev (eigenbasis) = {_fmt_matrix(eb)}")
    else:
        lines += [
            "six-term sequence:",
            f"  {str(g['k0_af_u']).ljust(w)}  --ev-->  {g['k0_af']}  -->  {g['k0_u']}",
            f"  {' ' * w}                        |",
            f"  {str(g['k1_af_u']).ljust(w)}  <------  0  <------  {g['k1_u']}",
            "",
            f"H0 = {g['h0']}",
            f"H1 = {g['h1']}",
            f"H2 = {g['h2']}",
        ]
        if "k0_af1" in g:
            lines.append(f"K0(AF1) = {g['k0_af1']}  [{r.flags['af1_route']}]")
        lines.append(f"im delta0 rank in the limit: {r.ev['delta0_image_rank']}")
    lines.append("")
    lines.append(f"K0(u) = {g['k0_u']}")
    lines.append(f"K1(u) = {g['k1_u']}")
    for k, v in sorted(r.presentations.items()):
        lines.append(f"  {k}: {v}")
    lines.append("")
    f = r.flags
    lines.append(f"hyperplane condition: {'holds' if f['hyperplane_ok'] else 'fails'}")
    spl = ", ".join(f"{k}={v}" for k, v in sorted(f["splitting"].items()))
    lines.append(f"splitting: {spl}")
    lines.append(f"exactness check: {'ok' if f['exactness_ok'] else 'FAILED'}")
    if "closed_components" in f:
        comps = "; ".join("{" + ", ".join(c) + "}" for c in f["closed_components"])
        lines.append(f"non-primitive: direct sum over closed components {comps}")
        if f["dropped_labels"]:
            lines.append(f"  transient labels dropped: {', '.join(f['dropped_labels'])}")
    if not r.complete:
        lines.append("classification incomplete: some groups are given in bound form")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> KTheoryReport:
    return KTheoryReport.from_dict(json.loads(text))
