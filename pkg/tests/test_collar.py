import pytest

from apktheory.collar import collar_rule, collared_matrix, dump_collared
from apktheory.exactlin import IntMatrix
from helpers import builtin, one_d

FIB_SIGMA = [[0, 0, 0, 1], [1, 0, 1, 0], [1, 1, 0, 0], [1, 0, 1, 0]]
# Silver Mean sigma^2 in the order (b)b(a), (b)a(b), (a)b(b), (b)b(b)
SILVER_SIGMA2 = [[2, 2, 2, 1], [1, 1, 1, 0], [2, 2, 2, 1], [2, 2, 2, 1]]


def reindexed(m: IntMatrix, names, order):
    pos = [names.index(x) for x in order]
    return [[m[i, j] for j in pos] for i in pos]


def test_fibonacci_collared():
    cr = collar_rule(builtin("fibonacci"))
    assert cr.names() == ["(b)a(b)", "(a)b(a)", "(a)b(b)", "(b)b(a)"]
    assert collared_matrix(cr).tolist() == FIB_SIGMA


def test_fibonacci_mirrored_presentation():
    # a -> ab, b -> a has the same collared count
    cr = collar_rule(one_d("ab", "a"))
    assert len(cr.tiles) == 4
    assert sorted(cr.names()) == ["(a)a(b)", "(a)b(a)", "(b)a(a)", "(b)a(b)"]


def test_silver_mean_collared():
    cr = collar_rule(builtin("silver-mean"))
    names = cr.names()
    assert sorted(names) == ["(a)b(b)", "(b)a(b)", "(b)b(a)", "(b)b(b)"]
    m = collared_matrix(cr)
    order = ["(b)b(a)", "(b)a(b)", "(a)b(b)", "(b)b(b)"]
    assert reindexed(m @ m, names, order) == SILVER_SIGMA2


@pytest.mark.parametrize("name,cp", [("solenoid", 1), ("half-hex", 24), ("chair", 56)])
def test_collared_counts(name, cp):
    assert len(collar_rule(builtin(name)).tiles) == cp


def test_solenoid_matrix():
    assert collared_matrix(collar_rule(builtin("solenoid"))).tolist() == [[4]]


@pytest.mark.parametrize("name", ["fibonacci", "silver-mean", "half-hex", "chair"])
def test_row_sums_are_child_counts(name):
    rule = builtin(name)
    cr = collar_rule(rule)
    m = collared_matrix(cr)
    for i, t in enumerate(cr.tiles):
        assert sum(m.row(i)) == len(rule.children[t.core])


@pytest.mark.parametrize("name", ["half-hex", "chair"])
def test_collars_project_to_abelianization(name):
    # forgetting collars gives back the uncollared substitution matrix
    rule = builtin(name)
    cr = collar_rule(rule)
    m = collared_matrix(cr)
    ab = rule.abelianization()
    for i, t in enumerate(cr.tiles):
        got = [0] * len(rule.labels)
        for j, tj in enumerate(cr.tiles):
            got[rule.index[tj.core]] += m[i, j]
        assert got == list(ab.row(rule.index[t.core]))


def test_collar_contains_core_and_neighbours():
    cr = collar_rule(builtin("solenoid"))
    (t,) = cr.tiles
    offsets = sorted(o for _, o in t.collar)
    assert len(offsets) == 9
    assert (0, 0) in offsets


def test_dump_collared():
    doc = dump_collared(collar_rule(builtin("silver-mean")))
    assert doc["cp"] == 4
    assert doc["collared_prototiles"][0]["collar"] == ["b", "a", "b"]
