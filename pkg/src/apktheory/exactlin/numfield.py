"""Real number fields Q(alpha) with exact arithmetic and exact sign tests.

A field is given by the minimal polynomial of alpha and a rational interval
isolating the chosen real root. Signs are decided by interval arithmetic on
that interval, bisecting it until the answer is certain.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, gcd
from operator import add, mul, sub
from typing import Sequence

Q = Fraction
_new = object.__new__
FIXED_BITS = 96


class FieldSpec:
    """Q(alpha) for a real root alpha of an irreducible monic polynomial."""

    def __init__(self, minpoly: Sequence[int], interval: tuple[Fraction, Fraction]):
        mp = tuple(int(c) for c in minpoly)
        if not mp or mp[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        if lo > hi:
            raise ValueError("isolating interval is reversed")
        self.minpoly = mp
        self.degree = len(mp) - 1
        self.interval = (lo, hi)
        if self.degree > 1:
            _check_irreducible(mp)
            if _count_roots(mp, lo, hi) != 1:
                raise ValueError("interval does not isolate exactly one real root")
        elif -Fraction(mp[0]) < lo or -Fraction(mp[0]) > hi:
            raise ValueError("interval does not contain the rational root")
        # refined interval, shared by every element of the field
        self._box = [lo, hi]
        self._fixed: tuple[int, ...] | None = None

    def key(self) -> tuple:
        return (self.minpoly, self.interval)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"FieldSpec({list(self.minpoly)}, ({self.interval[0]}, {self.interval[1]}))"

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls((0, 1), (Fraction(0), Fraction(0)))

    def elem(self, coeffs: Sequence) -> "FieldElement":
        return FieldElement(coeffs, self)

    def gen(self) -> "FieldElement":
        c = [Q(0)] * self.degree
        if self.degree == 1:
            c[0] = Q(-self.minpoly[0])
        else:
            c[1] = Q(1)
        return FieldElement(c, self)

    def refine(self) -> tuple[Fraction, Fraction]:
        """Halve the isolating box once and return it."""
        lo, hi = self._box
        if lo == hi:
            return lo, hi
        mid = (lo + hi) / 2
        sm = _sign(_peval(self.minpoly, mid))
        if sm == 0:
            self._box[:] = [mid, mid]
        elif sm == _sign(_peval(self.minpoly, lo)):
            self._box[0] = mid
        else:
            self._box[1] = mid
        return self._box[0], self._box[1]

    def fixed(self) -> tuple[int, ...]:
        """Integers g_i with |alpha^i * 2^FIXED_BITS - g_i| <= 2."""
        if self._fixed is None:
            scale = 1 << FIXED_BITS
            while True:
                lo, hi = self._box
                encl = [_interval_eval([0] * i + [1], lo, hi) for i in range(self.degree)]
                if all((b - a) * scale <= 1 for a, b in encl):
                    break
                self.refine()
            self._fixed = tuple(floor(a * scale) for a, _ in encl)
        return self._fixed

    def approx(self, coeffs: Sequence[Fraction], tol: Fraction = Fraction(1, 10**15)) -> float:
        while self._box[1] - self._box[0] > tol:
            self.refine()
        mid = (self._box[0] + self._box[1]) / 2
        return float(_peval(coeffs, mid))


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _count_roots(p: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in [lo, hi] via a Sturm sequence."""
    seq = [[Fraction(c) for c in p], _deriv([Fraction(c) for c in p])]
    while len(seq[-1]) > 1:
        r = _prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])

    def changes(x):
        vals = [_sign(_peval(s, x)) for s in seq]
        vals = [v for v in vals if v]
        return sum(1 for a, b in zip(vals, vals[1:]) if a != b)

    n = changes(lo) - changes(hi)
    if _peval(p, lo) == 0:
        n += 1
    return n


def _deriv(p):
    return [k * p[k] for k in range(1, len(p))]


def _prem(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def _check_irreducible(mp: tuple[int, ...]) -> None:
    from .poly import factor

    fs = factor(mp)
    if len(fs) != 1 or fs[0][1] != 1:
        raise ValueError("minimal polynomial is reducible")


def _polymulmod(a, b, mp):
    n = len(mp) - 1
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] -= c * mp[i]
    return prod[:n] + [Fraction(0)] * (n - len(prod[:n]))


def _poly_inverse(a, mp):
    """Inverse of a modulo mp over Q by the extended Euclidean algorithm."""
    def strip(p):
        p = list(p)
        while p and p[-1] == 0:
            p.pop()
        return p

    r0, r1 = [Fraction(c) for c in mp], strip(a)
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        # r0 = q r1 + r
        q = [Fraction(0)] * (len(r0) - len(r1) + 1)
        r = list(r0)
        while len(r) >= len(r1) and r:
            f = r[-1] / r1[-1]
            shift = len(r) - len(r1)
            q[shift] = f
            for i, c in enumerate(r1):
                r[shift + i] -= f * c
            r = strip(r)
        qs = [Fraction(0)] * (len(q) + len(s1))
        for i, x in enumerate(q):
            for j, y in enumerate(s1):
                qs[i + j] += x * y
        s_new = [Fraction(0)] * max(len(s0), len(qs))
        for i, c in enumerate(s0):
            s_new[i] += c
        for i, c in enumerate(qs):
            s_new[i] -= c
        r0, r1 = r1, r
        s0, s1 = s1, strip(s_new)
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    c = r1[0]
    return [x / c for x in s1]


class FieldElement:
    """Element of a real number field in the power basis.

    Stored as integer numerators over one positive denominator in lowest
    terms, so sums of elements with equal denominators never build Fractions.
    """

    __slots__ = ("n", "d", "field", "_h")

    def __init__(self, coeffs: Sequence, field: FieldSpec):
        c = [Fraction(x) for x in coeffs]
        if len(c) < field.degree:
            c += [Fraction(0)] * (field.degree - len(c))
        if len(c) != field.degree:
            raise ValueError("coefficient vector length must equal the field degree")
        d = 1
        for x in c:
            d = d * x.denominator // gcd(d, x.denominator)
        self.n = tuple(x.numerator * (d // x.denominator) for x in c)
        self.d = d
        self.field = field
        self._h = None

    @classmethod
    def _raw(cls, n, d: int, field: FieldSpec) -> "FieldElement":
        g = gcd(d, *n)
        if g != 1:
            n = tuple([x // g for x in n])
            d //= g
        else:
            n = tuple(n)
        e = _new(cls)
        e.n, e.d, e.field, e._h = n, d, field, None
        return e

    @property
    def c(self) -> tuple:
        return tuple(Fraction(x, self.d) for x in self.n)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement((Fraction(other),), self.field)
        return NotImplemented

    def _lin(self, o: "FieldElement", sgn: int) -> "FieldElement":
        op = add if sgn > 0 else sub
        if self.d == o.d:
            return FieldElement._raw(list(map(op, self.n, o.n)), self.d, self.field)
        g = gcd(self.d, o.d)
        ka, kb = o.d // g, self.d // g
        return FieldElement._raw([op(a * ka, b * kb) for a, b in zip(self.n, o.n)], self.d * ka, self.field)

    def __add__(self, other):
        if type(other) is FieldElement and other.field is self.field:
            return self._lin(other, 1)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._lin(o, 1)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is FieldElement and other.field is self.field:
            return self._lin(other, -1)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._lin(o, -1)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o._lin(self, -1)

    def __neg__(self):
        return FieldElement._raw([-a for a in self.n], self.d, self.field)

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldElement._raw([a * other for a in self.n], self.d, self.field)
        if isinstance(other, Fraction):
            return FieldElement._raw([a * other.numerator for a in self.n], self.d * other.denominator, self.field)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement._raw(_intmulmod(self.n, o.n, self.field.minpoly), self.d * o.d, self.field)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not any(self.n):
            raise ZeroDivisionError("inverse of zero")
        if self.field.degree == 1:
            return FieldElement([Fraction(self.d, self.n[0])], self.field)
        return FieldElement(_poly_inverse(self.c, self.field.minpoly), self.field)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            q = Fraction(other)
            return self * Fraction(q.denominator, q.numerator)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def sign(self) -> int:
        return _sign_int(self.n, self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.n == other.n and self.d == other.d and self.field == other.field
        if isinstance(other, (int, Fraction)):
            return Fraction(self.n[0], self.d) == other and not any(self.n[1:])
        return NotImplemented

    def __hash__(self) -> int:
        if self._h is None:
            if not any(self.n[1:]):
                self._h = hash(Fraction(self.n[0], self.d))
            else:
                self._h = hash((self.n, self.d))
        return self._h

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self) -> bool:
        return any(self.n)

    def __float__(self) -> float:
        return self.field.approx(self.c)

    def is_rational(self) -> bool:
        return not any(self.n[1:])

    def __repr__(self) -> str:
        return f"FieldElement({[str(x) for x in self.c]})"


def _sign_int(n, field: FieldSpec) -> int:
    """Sign of sum n_i alpha^i for integers n_i."""
    if not any(n):
        return 0
    if not any(n[1:]):
        return _sign(n[0])
    # fixed-point filter, exact fallback when the value is tiny
    s = sum(map(mul, n, field.fixed()))
    if abs(s) > 2 * sum(map(abs, n)):
        return _sign(s)
    while True:
        lo, hi = field._box
        a, b = _interval_eval(n, lo, hi)
        if a > 0:
            return 1
        if b < 0:
            return -1
        if lo == hi:
            return _sign(a)
        field.refine()


def orient_sign(a, b, c) -> int:
    """Sign of (b - a) x (c - a) for points with FieldElement coordinates."""
    pts = (a[0], a[1], b[0], b[1], c[0], c[1])
    field = pts[0].field
    den = 1
    for e in pts:
        if e.d != 1 and den % e.d:
            den = den * e.d // gcd(den, e.d)
    ax, ay, bx, by, cx, cy = [[x * (den // e.d) for x in e.n] if e.d != den else e.n for e in pts]
    ux, uy = list(map(sub, bx, ax)), list(map(sub, by, ay))
    vx, vy = list(map(sub, cx, ax)), list(map(sub, cy, ay))
    mp = field.minpoly
    val = list(map(sub, _intmulmod(ux, vy, mp), _intmulmod(uy, vx, mp)))
    return _sign_int(val, field)


def _intmulmod(a, b, mp):
    """Product of integer coefficient vectors modulo a monic integer polynomial."""
    n = len(mp) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n):
                prod[k - n + i] -= c * mp[i]
    return prod[:n] + [0] * (n - len(prod[:n]))


def _interval_eval(coeffs, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of p([lo, hi]) by interval Horner evaluation."""
    a = b = Fraction(0)
    for c in reversed(coeffs):
        # [a, b] * [lo, hi]
        ps = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(ps) + c, max(ps) + c
    return a, b
