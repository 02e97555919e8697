import pytest

from apktheory.apcomplex import build_complex, cochain_system, diagnostics, dump_complex, orient
from apktheory.collar import collar_rule
from apktheory.exactlin import IntMatrix, rank
from helpers import BUILTINS, built, builtin

ROWS = {
    "solenoid": (1, 2, 1, 2, 1),
    "half-hex": (24, 60, 38, 42, 20),
    "chair": (56, 224, 175, 84, 34),
}


def test_solenoid_is_a_torus():
    run = built("solenoid")
    dims = [c.dim for c in run.cells]
    assert (dims.count(0), dims.count(1), dims.count(2)) == (1, 2, 1)
    cs = run.cochains
    assert cs.delta0.is_zero() and cs.delta0.shape == (2, 1)
    assert cs.delta1.is_zero() and cs.delta1.shape == (1, 2)
    assert cs.sigma1 == IntMatrix.diag([2, 2])
    assert cs.sigma2 == IntMatrix([[4]])
    assert cs.hyperplane_ok


@pytest.mark.parametrize("name", sorted(ROWS))
def test_table_rows(name):
    assert built(name).diagnostics.row() == ROWS[name]


def test_alternative_counts_kept():
    d = built("half-hex").diagnostics
    assert (d.pi_product, d.l_pi_corner) == (66, 180)
    d = built("chair").diagnostics
    assert (d.pi_product, d.l_pi_corner) == (232, 604)


def test_hyperplane_condition():
    assert built("half-hex").cochains.hyperplane_ok
    assert not built("chair").cochains.hyperplane_ok


def test_silver_mean_loop_edge():
    run = built("silver-mean")
    names = run.collared.names()
    k = names.index("(b)b(b)")
    head, tail = run.incidence.ends[k]
    assert head == tail
    assert run.cochains.delta0.row(k) == (0, 0, 0)
    assert run.cochains.c1 == 4


def test_fibonacci_relative_matrix():
    s0 = built("fibonacci").cochains.sigma0
    assert (s0 @ s0).tolist() == [[0, 0, 1], [0, 1, 0], [0, 0, 1]]


@pytest.mark.parametrize("name", BUILTINS)
def test_cochain_identities(name):
    cs = built(name).cochains
    assert cs.delta0 @ cs.sigma0 == cs.sigma1 @ cs.delta0
    if cs.dimension == 2:
        assert (cs.delta1 @ cs.delta0).is_zero()
        assert cs.sigma2 @ cs.delta1 == cs.delta1 @ cs.sigma1


@pytest.mark.parametrize("name", BUILTINS)
def test_euler_characteristic(name):
    cs = built(name).cochains
    if cs.dimension == 1:
        r0 = rank(cs.delta0)
        h0, h1 = cs.c0 - r0, cs.c1 - r0
        assert cs.c0 - cs.c1 == h0 - h1
    else:
        r0, r1 = rank(cs.delta0), rank(cs.delta1)
        h = (cs.c0 - r0, cs.c1 - r0 - r1, cs.c2 - r1)
        assert cs.c0 - cs.c1 + cs.c2 == h[0] - h[1] + h[2]
        assert h[0] == 1  # connected


@pytest.mark.parametrize("name", ["fibonacci", "half-hex", "chair"])
def test_orientation_seed_changes_signs_only(name):
    base = built(name).cochains
    other = built(name, 7).cochains
    assert (base.c0, base.c1, base.c2) == (other.c0, other.c1, other.c2)
    flips = built(name, 7).incidence.flips
    d = IntMatrix.diag(list(flips))
    assert other.delta0 == d @ base.delta0
    assert other.sigma1 == d @ base.sigma1 @ d


def test_orientation_deterministic():
    cr = collar_rule(builtin("half-hex"))
    a = cochain_system(*build_complex(cr), cr)
    b = cochain_system(*build_complex(cr), cr)
    assert a.delta1 == b.delta1 and a.sigma1 == b.sigma1
    cells, inc = build_complex(cr)
    assert orient(cells, inc, seed=3).flips == orient(cells, inc, seed=3).flips


def test_dump_complex_schema():
    run = built("solenoid")
    doc = dump_complex(run.cells, run.incidence, run.cochains, run.diagnostics)
    assert doc["schema"] == "apkt-complex/1"
    assert doc["matrices"]["sigma2"] == [[4]]
    assert doc["diagnostics"]["pi"] == 2
    assert diagnostics(run.cells, run.incidence) == run.diagnostics
