"""Exact arithmetic in Q[z] and Q(z).

``Poly`` is a dense coefficient tuple (lowest degree first, no trailing zeros).
``RatFunc`` is a reduced fraction with monic denominator, so two equal rational
functions are structurally equal and hash the same.
"""

from fractions import Fraction
from functools import lru_cache
import math

INF = math.inf

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DivisionByZero(ZeroDivisionError):
    pass


def _q(c):
    return c if type(c) is Fraction else Fraction(c)


def _trim(cs):
    n = len(cs)
    while n and not cs[n - 1]:
        n -= 1
    return tuple(cs[:n])


class Poly:
    """Univariate polynomial in z over Q."""

    __slots__ = ("c", "_h")

    def __init__(self, coeffs=()):
        self.c = _trim([_q(a) for a in coeffs])
        self._h = None

    @classmethod
    def _raw(cls, cs):
        p = object.__new__(cls)
        p.c = cs
        p._h = None
        return p

    @classmethod
    def const(cls, a):
        a = _q(a)
        return cls._raw((a,) if a else ())

    @classmethod
    def monomial(cls, e, a=1):
        a = _q(a)
        if not a:
            return ZERO_POLY
        return cls._raw((_ZERO,) * e + (a,))

    @property
    def degree(self):
        return len(self.c) - 1 if self.c else -INF

    def is_zero(self):
        return not self.c

    def is_one(self):
        return len(self.c) == 1 and self.c[0] == 1

    def is_const(self):
        return len(self.c) <= 1

    @property
    def lc(self):
        return self.c[-1] if self.c else _ZERO

    def low_order(self):
        """Exponent of the lowest nonzero term (the z-adic valuation)."""
        for i, a in enumerate(self.c):
            if a:
                return i
        return INF

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == Poly.const(other).c
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(self.c)
        return self._h

    def __bool__(self):
        return bool(self.c)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return Poly._raw(_trim(out))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-a for a in self.c))

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = _q(other)
            if not other:
                return ZERO_POLY
            return Poly._raw(tuple(a * other for a in self.c))
        a, b = self.c, other.c
        if not a or not b:
            return ZERO_POLY
        if len(b) == 1:
            return self * b[0]
        if len(a) == 1:
            return other * a[0]
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    out[i + j] += u * v
        return Poly._raw(_trim(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        r = ONE_POLY
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def divmod(self, other):
        if not other.c:
            raise DivisionByZero("polynomial division by zero")
        r = list(self.c)
        db = len(other.c) - 1
        if len(r) - 1 < db:
            return ZERO_POLY, self
        inv = 1 / other.c[-1]
        q = [_ZERO] * (len(r) - db)
        for k in range(len(r) - 1 - db, -1, -1):
            t = r[k + db] * inv
            if t:
                q[k] = t
                for j, v in enumerate(other.c):
                    r[k + j] -= t * v
        return Poly._raw(_trim(q)), Poly._raw(_trim(r[:db]))

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if not self.c or self.c[-1] == 1:
            return self
        inv = 1 / self.c[-1]
        return Poly._raw(tuple(a * inv for a in self.c))

    def __call__(self, a):
        acc = _ZERO
        for v in reversed(self.c):
            acc = acc * a + v
        return acc

    def shift(self, c):
        """p(z + c), via repeated synthetic division (Taylor shift)."""
        c = _q(c)
        if not c or len(self.c) <= 1:
            return self
        a = list(self.c)
        n = len(a)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                a[j] += c * a[j + 1]
        return Poly._raw(_trim(a))

    def root_multiplicity(self, a):
        """Multiplicity of z = a as a root (0 if not a root)."""
        if not self.c:
            return INF
        a = _q(a)
        cs = list(self.c)
        m = 0
        while len(cs) > 1:
            # synthetic division by (z - a)
            q = [_ZERO] * (len(cs) - 1)
            acc = _ZERO
            for k in range(len(cs) - 1, 0, -1):
                acc = acc * a + cs[k]
                q[k - 1] = acc
            if acc * a + cs[0]:
                break
            cs = q
            m += 1
        return m

    def rational_roots(self):
        """Distinct rational roots, via the rational root theorem."""
        if len(self.c) <= 1:
            return []
        lo = self.low_order()
        roots = [_ZERO] if lo else []
        cs = self.c[lo:]
        if len(cs) <= 1:
            return roots
        den = 1
        for v in cs:
            den = den * v.denominator // math.gcd(den, v.denominator)
        ints = [int(v * den) for v in cs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        ints = [v // g for v in ints]
        p = Poly(cs)
        for n in _divisors(abs(ints[0])):
            for d in _divisors(abs(ints[-1])):
                for s in (1, -1):
                    r = Fraction(s * n, d)
                    if r not in roots and not p(r):
                        roots.append(r)
        return sorted(roots)

    def __repr__(self):
        return f"Poly({list(self.c)!r})"

    def __str__(self):
        return render_poly(self, "z")


@lru_cache(maxsize=4096)
def _divisors(n):
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i * i != n:
                out.append(n // i)
        i += 1
    return tuple(sorted(out))


ZERO_POLY = Poly._raw(())
ONE_POLY = Poly._raw((_ONE,))
Z_POLY = Poly._raw((_ZERO, _ONE))


def _fmt_q(a):
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def render_poly(p, var="z"):
    if not p.c:
        return "0"
    parts = []
    for e in range(len(p.c) - 1, -1, -1):
        a = p.c[e]
        if not a:
            continue
        sign = "-" if a < 0 else "+"
        a = abs(a)
        if e == 0:
            body = _fmt_q(a)
        else:
            mon = var if e == 1 else f"{var}^{e}"
            body = mon if a == 1 else f"{_fmt_q(a)}*{mon}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def poly_gcd(a, b):
    """Monic gcd; gcd(0, 0) = 0."""
    if isinstance(a, RatFunc):
        a = a.as_poly()
    if isinstance(b, RatFunc):
        b = b.as_poly()
    for m, other in ((a, b), (b, a)):
        # gcd with a monomial is a power of z
        if m.c and other.c and not any(m.c[:-1]):
            return Poly.monomial(min(len(m.c) - 1, other.low_order()))
    while b.c:
        if len(b.c) == 1:
            return ONE_POLY
        a, b = b, a % b
    return a.monic()


def poly_lcm(a, b):
    if not a.c or not b.c:
        return ZERO_POLY
    if a.is_one():
        return b.monic()
    if b.is_one():
        return a.monic()
    return (a * b // poly_gcd(a, b)).monic()


def poly_xgcd(a, b):
    """(g, s, t) with s*a + t*b = g monic (or 0)."""
    r0, r1 = a, b
    s0, s1 = ONE_POLY, ZERO_POLY
    t0, t1 = ZERO_POLY, ONE_POLY
    while r1.c:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.c:
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


class RatFunc:
    """Element of Q(z) kept as num/den with gcd 1 and den monic."""

    __slots__ = ("num", "den", "_h")

    def __init__(self, num=0, den=1):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if not isinstance(den, Poly):
            den = Poly.const(den)
        if not den.c:
            raise DivisionByZero("zero denominator")
        if not num.c:
            self.num, self.den = ZERO_POLY, ONE_POLY
        elif den.is_const():
            self.num, self.den = num * (1 / den.c[0]), ONE_POLY
        else:
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num // g, den // g
            lc = den.c[-1]
            if lc != 1:
                num, den = num * (1 / lc), den * (1 / lc)
            self.num, self.den = num, den
        self._h = None

    @classmethod
    def _raw(cls, num, den):
        r = object.__new__(cls)
        r.num, r.den, r._h = num, den, None
        return r

    @classmethod
    def z_power(cls, e, a=1):
        """a * z**e for any integer e."""
        a = _q(a)
        if e >= 0:
            return cls._raw(Poly.monomial(e, a), ONE_POLY)
        return cls._raw(Poly.const(a), Poly.monomial(-e))

    @classmethod
    def coerce(cls, v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, Poly):
            return cls._raw(v, ONE_POLY)
        v = _q(v)
        return cls._raw(Poly.const(v), ONE_POLY)

    def is_zero(self):
        return not self.num.c

    def __bool__(self):
        return bool(self.num.c)

    def is_one(self):
        return self.den.c == ONE_POLY.c and self.num.c == ONE_POLY.c

    def is_polynomial(self):
        return len(self.den.c) == 1

    def is_const(self):
        return len(self.den.c) == 1 and len(self.num.c) <= 1

    def as_poly(self):
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def const_value(self):
        if not self.is_const():
            raise ValueError(f"{self} is not a constant")
        return self.num.c[0] if self.num.c else _ZERO

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num.c == other.num.c and self.den.c == other.den.c
        if isinstance(other, (int, Fraction, Poly)):
            return self == RatFunc.coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.num.c, self.den.c))
        return self._h

    def __add__(self, other):
        other = RatFunc.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RatFunc._raw(self.num + other.num, ONE_POLY)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        other = RatFunc.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RatFunc._raw(self.num * other.num, ONE_POLY)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.c:
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc._raw(self.num ** n, self.den ** n)

    def __call__(self, a):
        d = self.den(a)
        if not d:
            raise DivisionByZero(f"pole of {self} at z={a}")
        return self.num(a) / d

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.is_one():
            return render_poly(self.num)
        n = render_poly(self.num)
        if len([a for a in self.num.c if a]) > 1:
            n = f"({n})"
        d = render_poly(self.den)
        if len([a for a in self.den.c if a]) > 1 or (self.den.c[-1] != 1):
            d = f"({d})"
        return f"{n}/{d}"


ZERO = RatFunc._raw(ZERO_POLY, ONE_POLY)
ONE = RatFunc._raw(ONE_POLY, ONE_POLY)
Z = RatFunc._raw(Z_POLY, ONE_POLY)


def rf_arith(a, b, op):
    a, b = RatFunc.coerce(a), RatFunc.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def valuation_at(r, a=0):
    """Order of vanishing of r at z = a; negative for a pole, +inf for zero."""
    r = RatFunc.coerce(r)
    if not r.num.c:
        return INF
    return r.num.root_multiplicity(a) - r.den.root_multiplicity(a)


def shift_z(r, c):
    """Substitute z -> z + c."""
    r = RatFunc.coerce(r)
    c = _q(c)
    if not c:
        return r
    return RatFunc(r.num.shift(c), r.den.shift(c))


def is_polynomial(r):
    return RatFunc.coerce(r).is_polynomial()
