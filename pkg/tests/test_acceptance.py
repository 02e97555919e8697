"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or as a
script for a plain summary. Tolerances: all numbers exact; wall-clock
limits 1 s, 1 s, 1 s, 30 s, 120 s for criteria 1-5 and 60 s for 7.
"""

import sys
import time
from itertools import product
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from apktheory.abgroups import BOUNDS, CLASSIFIED, StationarySystem, classify_limit
from apktheory.apcomplex import cochain_system, orient
from apktheory.collar import collared_matrix
from apktheory.exactlin import IntMatrix, char_poly_factor, kernel_basis, rank
from apktheory.ktheory import compute_d1, compute_d2, render_report
from apktheory.pipeline import analyze
from helpers import BUILTINS, builtin
from lattice_oracle import oracle

LIMITS = {1: 1.0, 2: 1.0, 3: 1.0, 4: 30.0, 5: 120.0, 7: 60.0}


class Criterion:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.checks: list = []

    def check(self, what: str, ok: bool, detail: str = "") -> None:
        self.checks.append((what, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def line(self, seconds: float) -> str:
        failed = [f"{w} ({d})" if d else w for w, ok, d in self.checks if not ok]
        tag = "PASS" if self.ok else "FAIL"
        msg = f"[{tag}] criterion {self.number}: {self.title} ({seconds:.2f} s)"
        return msg + ("" if self.ok else " failed: " + "; ".join(failed))


def timed_run(name: str):
    start = time.monotonic()
    run = analyze(builtin(name))
    return run, time.monotonic() - start


def reorder(m: IntMatrix, names: list, order: list) -> list:
    pos = [names.index(x) for x in order]
    return [[m[i, j] for j in pos] for i in pos]


def eigen_counts(m: IntMatrix) -> dict:
    """Geometric multiplicities of the nonzero integer eigenvalues."""
    out = {}
    for f, _ in char_poly_factor(m):
        if len(f) == 2 and f[0] != 0:
            lam = -f[0]
            out[lam] = kernel_basis(m - IntMatrix.identity(m.rows).scale(lam)).cols
    return out


def groups(rep) -> dict:
    return {k: str(v) for k, v in rep.groups.items()}


def criterion_1() -> tuple[Criterion, float]:
    c = Criterion(1, "Fibonacci")
    run, secs = timed_run("fibonacci")
    cs, g = run.cochains, groups(run.report)
    c.check("CP = 4", len(run.collared.tiles) == 4)
    sigma = [[0, 0, 0, 1], [1, 0, 1, 0], [1, 1, 0, 0], [1, 0, 1, 0]]
    c.check("sigma matrix", collared_matrix(run.collared).tolist() == sigma)
    c.check("relative matrix", (cs.sigma0 @ cs.sigma0).tolist() == [[0, 0, 1], [0, 1, 0], [0, 0, 1]])
    want = {"k0_af": "Z^3", "k0_af_u": "Z^2", "k0_u": "Z^2", "k1_u": "Z"}
    c.check("groups", all(g[k] == v for k, v in want.items()), str(g))
    c.check("ev eigenbasis", "ev (eigenbasis) = [[0,0],[1,−1],[0,0]]" in render_report(run.report))
    c.check("time < 1 s", secs < LIMITS[1], f"{secs:.2f} s")
    return c, secs


def criterion_2() -> tuple[Criterion, float]:
    c = Criterion(2, "Silver Mean")
    run, secs = timed_run("silver-mean")
    g = groups(run.report)
    c.check("CP = 4", len(run.collared.tiles) == 4)
    m = collared_matrix(run.collared)
    order = ["(b)b(a)", "(b)a(b)", "(a)b(b)", "(b)b(b)"]
    want = [[2, 2, 2, 1], [1, 1, 1, 0], [2, 2, 2, 1], [2, 2, 2, 1]]
    c.check("sigma (squared)", reorder(m @ m, run.collared.names(), order) == want)
    c.check("ev = 0 on the limit", run.report.ev["zero_on_limit"])
    c.check("groups", g["k0_u"] == "Z^2" and g["k1_u"] == "Z", str(g))
    c.check("time < 1 s", secs < LIMITS[2], f"{secs:.2f} s")
    return c, secs


def criterion_3() -> tuple[Criterion, float]:
    c = Criterion(3, "solenoid")
    run, secs = timed_run("solenoid")
    g = groups(run.report)
    c.check("row (1,2,1,2,1)", run.diagnostics.row() == (1, 2, 1, 2, 1), str(run.diagnostics.row()))
    c.check("K0(u)", g["k0_u"] == "Z[1/4] ⊕ Z", g["k0_u"])
    c.check("K1(u)", g["k1_u"] == "Z[1/2]^2", g["k1_u"])
    c.check("K1(AF;u)", g["k1_af_u"] == "Z", g["k1_af_u"])
    c.check("time < 1 s", secs < LIMITS[3], f"{secs:.2f} s")
    return c, secs


def criterion_4() -> tuple[Criterion, float]:
    c = Criterion(4, "half-hex")
    run, secs = timed_run("half-hex")
    d, g = run.diagnostics, groups(run.report)
    c.check("CP/PI/FT/L(FT)", (d.cp, d.pi, d.ft, d.l_ft) == (24, 60, 42, 20), str(d.row()))
    ev = eigen_counts(run.cochains.sigma2)
    by_modulus: dict = {}
    for lam, k in ev.items():
        by_modulus[abs(lam)] = by_modulus.get(abs(lam), 0) + k
    c.check("sigma2 eigenvectors 4:1, 2:1, 1:4", by_modulus == {4: 1, 2: 1, 1: 4}, str(ev))
    c.check("K0(u)", g["k0_u"] == "Z[1/4] ⊕ Z^3", g["k0_u"])
    c.check("K1(u)", g["k1_u"] == "Z[1/2]^2", g["k1_u"])
    c.check("time < 30 s", secs < LIMITS[4], f"{secs:.2f} s")
    return c, secs


def criterion_5() -> tuple[Criterion, float]:
    c = Criterion(5, "chair")
    run, secs = timed_run("chair")
    d, g = run.diagnostics, groups(run.report)
    c.check("CP/PI/FT/L(FT)", (d.cp, d.pi, d.ft, d.l_ft) == (56, 224, 84, 34), str(d.row()))
    c.check("im delta0 = 0 in the limit", run.report.ev["delta0_image_rank"] == 0)
    c.check("K0(u)", g["k0_u"] == "Z[1/4] ⊕ Z[1/2]^2 ⊕ Z", g["k0_u"])
    c.check("K1(u)", g["k1_u"] == "Z[1/2]^2", g["k1_u"])
    c.check("time < 120 s", secs < LIMITS[5], f"{secs:.2f} s")
    return c, secs


def _same(a, b) -> bool:
    return all(k in b.groups and v.isomorphic(b.groups[k]) for k, v in a.groups.items() if k != "k0_af1")


def criterion_6() -> tuple[Criterion, float]:
    c = Criterion(6, "property suite over all builtins")
    start = time.monotonic()
    for name in BUILTINS:
        run = analyze(builtin(name))
        cs, d = run.cochains, run.diagnostics
        c.check(f"{name}: naturality", cs.delta0 @ cs.sigma0 == cs.sigma1 @ cs.delta0)
        if cs.dimension == 2:
            c.check(f"{name}: delta1 delta0 = 0", (cs.delta1 @ cs.delta0).is_zero())
            c.check(f"{name}: naturality in degree 1", cs.sigma2 @ cs.delta1 == cs.delta1 @ cs.sigma1)
            r0, r1 = rank(cs.delta0), rank(cs.delta1)
            homology = (cs.c0 - r0) - (cs.c1 - r0 - r1) + (cs.c2 - r1)
            c.check(f"{name}: Euler count", d.l_ft - d.ft + d.cp == homology)
        else:
            r0 = rank(cs.delta0)
            c.check(f"{name}: Euler count", d.ft - d.cp == (cs.c0 - r0) - (cs.c1 - r0))
        c.check(f"{name}: exactness", run.report.flags["exactness_ok"])
        sq = analyze(builtin(name).power(2)).report
        c.check(f"{name}: squaring", _same(run.report, sq))
        compute = compute_d1 if cs.dimension == 1 else compute_d2
        for seed in range(10):
            other = cochain_system(run.cells, orient(run.cells, run.incidence, seed=seed), run.collared)
            c.check(f"{name}: seed {seed}", _same(run.report, compute(other, name, d)))
    return c, time.monotonic() - start


def criterion_7() -> tuple[Criterion, float]:
    c = Criterion(7, "exhaustive 2x2 oracle")
    start = time.monotonic()
    bad = []
    for a, b, cc, d in product(range(-3, 4), repeat=4):
        if abs(a * d - b * cc) > 6:
            continue
        m = [[a, b], [cc, d]]
        status, want = oracle(m)
        got = classify_limit(StationarySystem.free(IntMatrix(m)))
        if status == "bounds":
            ok = got.status == BOUNDS
        else:
            ok = got.status == CLASSIFIED and _types(got) == want
        if not ok:
            bad.append(m)
    secs = time.monotonic() - start
    c.check("all matrices agree", not bad, str(bad[:3]))
    c.check("time < 60 s", secs < LIMITS[7], f"{secs:.2f} s")
    return c, secs


def _types(g) -> tuple:
    from apktheory.abgroups import prime_factors

    out = []
    for m, k in g.inverted:
        out += [tuple(prime_factors(m))] * k
    out += [()] * g.free_rank
    return tuple(sorted(out))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


def stretch_robinson() -> tuple[Criterion, float]:
    c = Criterion(8, "stretch: Robinson triangle")
    start = time.monotonic()
    run = analyze(builtin("robinson"), budget=STRETCH_BUDGET)
    secs = time.monotonic() - start
    rep, g = run.report, groups(run.report)
    c.check("row (300,540,264,360,64)", run.diagnostics.row() == (300, 540, 264, 360, 64), str(run.diagnostics.row()))
    ranks = (rep.k0_af_u.free_rank, rep.k0_af.free_rank, rep.k0_u.free_rank)
    c.check("Z^37 -> Z^40 -> Z^9", ranks == (37, 40, 9) and g["k0_u"] == "Z^9", str(ranks))
    c.check("K1(u) = Z^5", g["k1_u"] == "Z^5", g["k1_u"])
    c.check("hyperplane condition", rep.flags["hyperplane_ok"])
    return c, secs


def stretch_tuebingen() -> tuple[Criterion, float]:
    c = Criterion(8, "stretch: Tuebingen triangle")
    start = time.monotonic()
    run = analyze(builtin("tuebingen"), budget=STRETCH_BUDGET)
    secs = time.monotonic() - start
    rep, g = run.report, groups(run.report)
    c.check("row (860,1710,880,950,130)", run.diagnostics.row() == (860, 1710, 880, 950, 130),
            str(run.diagnostics.row()))
    ranks = (rep.k0_af_u.free_rank, rep.k0_af.free_rank, rep.k0_u.free_rank)
    c.check("Z^101 -> Z^120 -> Z^25", ranks == (101, 120, 25), str(ranks))
    c.check("K0(u) = Z^25 + Z_5^2", g["k0_u"] == "Z^25 ⊕ Z_5^2", g["k0_u"])
    snf = dict(zip(rep.h2.witness[::2], rep.h2.witness[1::2])).get("snf", ())
    c.check("finite-level witness: two factors of 5", [x for x in snf if x > 1] == [5, 5], str(rep.h2.witness))
    c.check("K1(u) = Z^5", g["k1_u"] == "Z^5", g["k1_u"])
    return c, secs


STRETCH_BUDGET = 1800.0
STRETCH = {"ammann-a5": None, "robinson": stretch_robinson, "tuebingen": stretch_tuebingen}


def stretch_lines() -> list[str]:
    """Non-gating: reported, never asserted."""
    from apktheory.cli import builtin_names

    shipped = set(builtin_names())
    out = []
    for name, fn in STRETCH.items():
        if fn is None or name not in shipped:
            out.append(f"[SKIP] criterion 8 (stretch, non-gating): {name}: rule file not shipped")
            continue
        c, secs = fn()
        out.append(c.line(secs) + " (non-gating)")
    return out


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 8)])
def test_criterion(crit):
    c, secs = crit()
    print("\n" + c.line(secs))
    assert c.ok, c.line(secs)


def test_stretch_reported():
    print("\n" + "\n".join(stretch_lines()))


if __name__ == "__main__":
    results = [crit() for crit in CRITERIA]
    for c, secs in results:
        print(c.line(secs))
    print("\n".join(stretch_lines()))
    sys.exit(0 if all(c.ok for c, _ in results) else 1)
