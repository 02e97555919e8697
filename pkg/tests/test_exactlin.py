import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apktheory.exactlin import (
    FieldSpec,
    IntMatrix,
    char_poly,
    char_poly_factor,
    det,
    kernel_basis,
    rank,
    rational_eigenspace,
    saturate,
    snf,
)
from apktheory.exactlin import _pykernels
from apktheory.exactlin.poly import pmul, ppow

FIB = IntMatrix([[0, 0, 0, 1], [1, 0, 1, 0], [1, 1, 0, 0], [1, 0, 1, 0]])
SILVER = IntMatrix([[2, 2, 2, 1], [1, 1, 1, 0], [2, 2, 2, 1], [2, 2, 2, 1]])


def naive_det(rows):
    a = [[Fraction(x) for x in r] for r in rows]
    n, d = len(a), Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def matrices(max_n=5, lo=-4, hi=4):
    return st.integers(1, max_n).flatmap(
        lambda n: st.integers(1, max_n).flatmap(
            lambda m: st.lists(st.lists(st.integers(lo, hi), min_size=m, max_size=m), min_size=n, max_size=n)
        )
    )


def square(max_n=5, lo=-4, hi=4):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)
    )


def test_snf_examples():
    assert snf(IntMatrix.identity(3))[0] == IntMatrix.identity(3)
    m = IntMatrix([[2, 4], [6, 8]])
    d, u, v = snf(m)
    assert d == IntMatrix([[2, 0], [0, 4]])
    assert u @ m @ v == d
    assert abs(det(d)) == abs(det(m)) == 8
    assert snf(IntMatrix.zeros(2, 3))[0] == IntMatrix.zeros(2, 3)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_property(rows):
    m = IntMatrix(rows)
    d, u, v = snf(m)
    assert u @ m @ v == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d[i, i] for i in range(min(d.shape))]
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d[i, j] == 0
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[: len(nz)] == nz


def test_kernel_examples():
    assert kernel_basis(IntMatrix.identity(2)).cols == 0
    k = kernel_basis(IntMatrix([[1, -1]]))
    assert k.columns() == [(1, 1)]
    k = kernel_basis(FIB)
    assert k.cols == 1 and k.col(0) in {(-1, 1, 1, 0), (1, -1, -1, 0)}


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_saturated(rows):
    m = IntMatrix(rows)
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert k.cols == m.cols - rank(m)
    # saturation: the lattice equals its own saturation
    if k.cols:
        assert saturate(k) == k


@settings(max_examples=100, deadline=None)
@given(matrices(lo=-20, hi=20))
def test_rank_matches_fraction_elimination(rows):
    m = IntMatrix(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    r = 0
    for c in range(len(a[0])):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    assert rank(m) == r


@settings(max_examples=100, deadline=None)
@given(square(6, -9, 9))
def test_det_and_charpoly_against_fractions(rows):
    m = IntMatrix(rows)
    assert det(m) == naive_det(rows)
    cp = char_poly(m)
    n = len(rows)
    for x in (-3, 0, 2, 7):
        shifted = [[(x if i == j else 0) - rows[i][j] for j in range(n)] for i in range(n)]
        assert sum(c * x**k for k, c in enumerate(cp)) == naive_det(shifted)


@settings(max_examples=60, deadline=None)
@given(square(6, -3, 3))
def test_factor_reassembles(rows):
    m = IntMatrix(rows)
    prod = (1,)
    for f, e in char_poly_factor(m):
        prod = pmul(prod, ppow(f, e))
    assert prod == char_poly(m)


def test_factor_examples():
    fs = dict(char_poly_factor(FIB))
    assert fs == {(0, 1): 1, (1, 1): 1, (-1, -1, 1): 1}
    fs = dict(char_poly_factor(SILVER))
    # x^2 (x^2 - 6x + 1): eigenvalues 0, 0 and (1 ± sqrt 2)^2
    assert fs == {(0, 1): 2, (1, -6, 1): 1}
    assert char_poly_factor(IntMatrix.identity(2)) == [((-1, 1), 2)]


def test_rational_eigenspace():
    assert rational_eigenspace(IntMatrix([[2, 0], [0, 3]]), 2).columns() == [(1, 0)]
    assert rational_eigenspace(IntMatrix.diag([2, 2]), 2).cols == 2
    assert rational_eigenspace(IntMatrix([[0, 1], [1, 0]]), 1).columns() == [(1, 1)]


def test_backends_agree():
    from apktheory.exactlin import kernels

    if kernels.BACKEND != "cython":
        pytest.skip("compiled kernels not built")
    from apktheory.exactlin import _ckernels

    rng = random.Random(7)
    for _ in range(200):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        a = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)]
        assert _ckernels.hermite(a, n) == _pykernels.hermite(a, n)
        sq = [[rng.randint(-6, 6) for _ in range(m)] for _ in range(m)]
        assert _ckernels.charpoly_mod(sq, 1000003) == _pykernels.charpoly_mod(sq, 1000003)
    # int64 overflow falls back to exact bigints
    big = [[10**40, 3], [7, 10**25]]
    assert _ckernels.hermite(big, 2) == _pykernels.hermite(big, 2)
    assert _ckernels.matmul(big, big, 2, 2) == _pykernels.matmul(big, big, 2, 2)


# --------------------------------------------------------------- fields

SQRT5 = FieldSpec((-5, 0, 1), (Fraction(2), Fraction(3)))


def test_field_spec_validation():
    with pytest.raises(ValueError):
        FieldSpec((-4, 0, 1), (Fraction(1), Fraction(3)))  # reducible
    with pytest.raises(ValueError):
        FieldSpec((-5, 0, 1), (Fraction(-3), Fraction(3)))  # two roots


fracs = st.fractions(min_value=-20, max_value=20, max_denominator=30)


@settings(max_examples=100, deadline=None)
@given(fracs, fracs, fracs, fracs)
def test_field_arithmetic_round_trip(a, b, c, d):
    x, y = SQRT5.elem([a, b]), SQRT5.elem([c, d])
    assert (x + y) - y == x
    assert (x * y) == y * x
    if y:
        assert (x / y) * y == x
    # compare with the float embedding
    s5 = 5 ** 0.5
    fx = float(a) + float(b) * s5
    assert abs(float(x) - fx) < 1e-9
    if abs(fx) > 1e-9:
        assert x.sign() == (1 if fx > 0 else -1)


def test_field_sign_is_exact_near_zero():
    # continued-fraction convergents of sqrt 5 alternate sides, within 1e-7
    for p, q in [(161, 72), (682, 305), (2889, 1292), (12238, 5473)]:
        x = SQRT5.elem([Fraction(-p, q), 1])
        assert x.sign() == (1 if 5 * q * q > p * p else -1)


def test_heptagonal_field():
    # 2cos(2pi/7) is a root of x^3 + x^2 - 2x - 1
    k = FieldSpec((-1, -2, 1, 1), (Fraction(6, 5), Fraction(13, 10)))
    a = k.gen()
    assert a * a * a + a * a - 2 * a - 1 == 0
    import math

    assert abs(float(a) - 2 * math.cos(2 * math.pi / 7)) < 1e-12
    assert (1 / a) * a == 1


def test_field_sign_below_fixed_point_precision():
    # (9 + 4 sqrt 5)^k = p + q sqrt 5 with p^2 - 5 q^2 = 1, so p - q sqrt 5 = 1 / (p + q sqrt 5) > 0
    p, q = 1, 0
    for _ in range(40):
        p, q = 9 * p + 20 * q, 4 * p + 9 * q
    assert p * p - 5 * q * q == 1
    assert SQRT5.elem([p, -q]).sign() == 1
    assert SQRT5.elem([-p, q]).sign() == -1
    assert SQRT5.elem([Fraction(p, 3), Fraction(-q, 3)]) > 0


DECAGONAL = FieldSpec((5, 0, -5, 0, 1), (Fraction(11, 10), Fraction(6, 5)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(fracs, min_size=4, max_size=4), min_size=6, max_size=6))
def test_fused_orient_matches_generic(cs):
    from apktheory.exactlin.numfield import orient_sign
    from apktheory.substitution import geometry as g

    a, b, c = [(DECAGONAL.elem(cs[2 * i]), DECAGONAL.elem(cs[2 * i + 1])) for i in range(3)]
    generic = g.sign(g.cross(g.sub(b, a), g.sub(c, a)))
    assert orient_sign(a, b, c) == generic == g.orient(a, b, c)
    assert orient_sign(a, a, c) == 0


def test_field_element_normal_form():
    x = SQRT5.elem([Fraction(2, 4), Fraction(3, 6)])
    assert (x.n, x.d) == ((1, 1), 2)
    assert x + x == SQRT5.elem([1, 1])
    assert hash(SQRT5.elem([Fraction(1, 2)])) == hash(Fraction(1, 2))
    assert SQRT5.elem([Fraction(1, 2)]) == Fraction(1, 2)
