"""Q(z)[x, y]: polynomials, endomorphisms, and Jung-van der Kulk peeling.

Steps are always listed in application order: the composite of
``[s1, s2, ..., sn]`` is ``s1 o s2 o ... o sn`` with
``(a o b)(t) = a(b(t))``, so replaying the list left to right from the
identity builds the automorphism stage by stage.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .scalar import INF, ONE, ZERO, Poly, RatFunc, poly_xgcd, shift_z, valuation_at


class NotAnAutomorphism(ValueError):
    pass


class NonUnitDeterminant(ValueError):
    pass


class CommPoly:
    """Polynomial in commuting x, y with Q(z) coefficients."""

    __slots__ = ("terms", "_h")

    def __init__(self, terms=None):
        self.terms = {k: RatFunc.coerce(v) for k, v in (terms or {}).items() if v}
        self._h = None

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def var(cls, v):
        return cls({(1, 0) if v == "x" else (0, 1): ONE})

    @staticmethod
    def coerce(v):
        return v if isinstance(v, CommPoly) else CommPoly.const(v)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self):
        if not self.terms:
            return -INF
        return max(i + j for i, j in self.terms)

    def leading_form(self):
        d = self.degree
        return CommPoly({k: v for k, v in self.terms.items() if sum(k) == d})

    def homogeneous(self, d):
        return CommPoly({k: v for k, v in self.terms.items() if sum(k) == d})

    def coeff(self, i, j):
        return self.terms.get((i, j), ZERO)

    def has_polynomial_coefficients(self):
        return all(v.is_polynomial() for v in self.terms.values())

    def is_constant(self):
        return all(k == (0, 0) for k in self.terms)

    def __eq__(self, other):
        if not isinstance(other, CommPoly):
            try:
                other = CommPoly.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self.terms.items()))
        return self._h

    def __add__(self, other):
        other = CommPoly.coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out[k] + v if k in out else v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return CommPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return CommPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-CommPoly.coerce(other))

    def __rsub__(self, other):
        return CommPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, CommPoly):
            c = RatFunc.coerce(other)
            if not c:
                return CommPoly()
            return CommPoly({k: v * c for k, v in self.terms.items()})
        out = {}
        for (i, j), u in self.terms.items():
            for (k, l), v in other.terms.items():
                key = (i + k, j + l)
                out[key] = out[key] + u * v if key in out else u * v
        return CommPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        r = CommPoly.const(1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def diff(self, v):
        out = {}
        for (i, j), c in self.terms.items():
            if v == "x" and i:
                out[(i - 1, j)] = c * i
            elif v == "y" and j:
                out[(i, j - 1)] = c * j
        return CommPoly(out)

    def substitute(self, fx, fy):
        fx, fy = CommPoly.coerce(fx), CommPoly.coerce(fy)
        px, py = [CommPoly.const(1)], [CommPoly.const(1)]
        total = CommPoly()
        for (i, j), c in self.terms.items():
            while len(px) <= i:
                px.append(px[-1] * fx)
            while len(py) <= j:
                py.append(py[-1] * fy)
            total = total + px[i] * py[j] * c
        return total

    def map_coefficients(self, fn):
        return CommPoly({k: fn(v) for k, v in self.terms.items()})

    def __repr__(self):
        return f"CommPoly({render_comm(self)!r})"

    def __str__(self):
        return render_comm(self)


def render_comm(p):
    if not p.terms:
        return "0"
    out = []
    for (i, j) in sorted(p.terms, key=lambda k: (-(k[0] + k[1]), -k[0])):
        c = p.terms[(i, j)]
        mono = []
        if i:
            mono.append("x" if i == 1 else f"x^{i}")
        if j:
            mono.append("y" if j == 1 else f"y^{j}")
        cs = str(c)
        if not cs.lstrip("-").isdigit() and cs != "z":
            cs = f"({cs})"
        if not mono:
            out.append(cs)
        elif c.is_one():
            out.append("*".join(mono))
        else:
            out.append("*".join([cs] + mono))
    return " + ".join(out)


X = CommPoly.var("x")
Y = CommPoly.var("y")


@dataclass(frozen=True)
class CommEndo:
    image_x: CommPoly
    image_y: CommPoly

    @classmethod
    def identity(cls):
        return cls(X, Y)

    def apply(self, p):
        return CommPoly.coerce(p).substitute(self.image_x, self.image_y)

    def has_polynomial_coefficients(self):
        return self.image_x.has_polynomial_coefficients() and self.image_y.has_polynomial_coefficients()

    def map_coefficients(self, fn):
        return CommEndo(self.image_x.map_coefficients(fn), self.image_y.map_coefficients(fn))


def comm_compose(outer, inner):
    """(outer o inner)(t) = outer(inner(t))."""
    return CommEndo(outer.apply(inner.image_x), outer.apply(inner.image_y))


def jacobian_det(e):
    f, g = e.image_x, e.image_y
    return f.diff("x") * g.diff("y") - f.diff("y") * g.diff("x")


# steps -----------------------------------------------------------------


@dataclass(frozen=True)
class ElemX:
    """x -> x + c*y^m."""
    c: RatFunc
    m: int

    def endo(self):
        return CommEndo(X + Y ** self.m * self.c, Y)

    def inverse(self):
        return ElemX(-self.c, self.m)


@dataclass(frozen=True)
class ElemY:
    """y -> y + c*x^m."""
    c: RatFunc
    m: int

    def endo(self):
        return CommEndo(X, Y + X ** self.m * self.c)

    def inverse(self):
        return ElemY(-self.c, self.m)


@dataclass(frozen=True)
class Affine:
    """x -> a11*x + a12*y + t1,  y -> a21*x + a22*y + t2."""
    matrix: tuple
    translation: tuple = (ZERO, ZERO)

    def __post_init__(self):
        m = tuple(tuple(RatFunc.coerce(v) for v in row) for row in self.matrix)
        t = tuple(RatFunc.coerce(v) for v in self.translation)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", t)

    @property
    def det(self):
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def endo(self):
        (a, b), (c, d) = self.matrix
        t1, t2 = self.translation
        return CommEndo(X * a + Y * b + t1, X * c + Y * d + t2)

    def inverse(self):
        (a, b), (c, d) = self.matrix
        det = self.det
        if not det:
            raise NotAnAutomorphism("singular affine map")
        inv = ((d / det, -b / det), (-c / det, a / det))
        t1, t2 = self.translation
        return Affine(inv, (-(inv[0][0] * t1 + inv[0][1] * t2), -(inv[1][0] * t1 + inv[1][1] * t2)))

    def is_identity(self):
        return self.matrix == ((ONE, ZERO), (ZERO, ONE)) and not any(self.translation)


CommStep = (ElemX, ElemY, Affine)


def step_coefficients(step):
    if isinstance(step, Affine):
        return [v for row in step.matrix for v in row] + list(step.translation)
    return [step.c]


def recompose(steps):
    e = CommEndo.identity()
    for s in steps:
        e = comm_compose(e, s.endo())
    return e


def replay(steps):
    stages = [CommEndo.identity()]
    for s in steps:
        stages.append(comm_compose(stages[-1], s.endo()))
    return stages


def invert_steps(steps):
    return [s.inverse() for s in reversed(steps)]


# peeling ----------------------------------------------------------------


def _ratio(hi, lo, m):
    """c with hi = c * lo^m, or None."""
    pw = lo ** m
    k = max(pw.terms)
    c = hi.coeff(*k) / pw.terms[k]
    if hi == pw * c:
        return c
    return None


@dataclass
class _Peel:
    peeled: list = field(default_factory=list)
    failure: dict = None


def _peel_loop(e, gate=None):
    """Shared loop; ``gate(c)`` may veto a coefficient (returns False)."""
    f, g = e.image_x, e.image_y
    state = _Peel()
    while True:
        df, dg = f.degree, g.degree
        if df < 1 or dg < 1:
            raise NotAnAutomorphism("an image is constant")
        if df + dg <= 2:
            break
        choices = []
        if dg >= df and dg % df == 0:
            choices.append("y")
        if df >= dg and df % dg == 0:
            choices.append("x")
        if not choices:
            raise NotAnAutomorphism(f"degrees {df}, {dg}: neither divides the other")
        done = False
        vetoed = None
        for side in choices:
            hi, lo = (g, f) if side == "y" else (f, g)
            m = hi.degree // lo.degree
            c = _ratio(hi.leading_form(), lo.leading_form(), m)
            if c is None:
                continue
            if gate is not None and not gate(c):
                vetoed = vetoed or {"variable": side, "coefficient": c, "exponent": m,
                                    "stage_degrees": (df, dg)}
                continue
            if side == "y":
                g = g - f ** m * c
                step = ElemY(c, m) if m > 1 else Affine(((ONE, ZERO), (c, ONE)))
            else:
                f = f - g ** m * c
                step = ElemX(c, m) if m > 1 else Affine(((ONE, c), (ZERO, ONE)))
            state.peeled.append(step)
            done = True
            break
        if not done:
            if vetoed is not None:
                state.failure = vetoed
                return f, g, state
            raise NotAnAutomorphism(
                f"leading forms are not proportional to powers of each other (degrees {df}, {dg})")
    return f, g, state


def _affine_of(f, g):
    for p in (f, g):
        if any(sum(k) > 1 for k in p.terms):
            raise NotAnAutomorphism("residual map is not affine")
    a = Affine(((f.coeff(1, 0), f.coeff(0, 1)), (g.coeff(1, 0), g.coeff(0, 1))),
               (f.coeff(0, 0), g.coeff(0, 0)))
    if not a.det:
        raise NotAnAutomorphism("affine part is singular")
    return a


def jvdk_decompose(e):
    """Canonical elementary sequence over Q(z), in application order.

    The first entry is the affine part (left out when it is the identity);
    the remaining entries are the peeled elementary steps, last peeled first.
    Tied degrees peel the y-image first.
    """
    f, g, state = _peel_loop(e)
    a = _affine_of(f, g)
    return ([] if a.is_identity() else [a]) + list(reversed(state.peeled))


@dataclass(frozen=True)
class Offender:
    index: int
    variable: str
    coefficient: RatFunc
    exponent: int
    pole: Fraction
    valuation: int


def _candidate_poles(steps):
    roots = set()
    for s in steps:
        for c in step_coefficients(s):
            roots.update(c.den.rational_roots())
    roots.discard(Fraction(0))
    return sorted(roots, key=lambda r: (abs(r), r))


def detect_pattern(steps):
    """First elementary step (exponent > 1) whose coefficient has a pole.

    Poles at z = 0 are looked for first; then every rational root of a
    denominator in the sequence is moved to 0 by z -> z + a and re-checked.
    """
    for pole in [Fraction(0)] + _candidate_poles(steps):
        for i, s in enumerate(steps):
            if isinstance(s, Affine) or s.m < 2:
                continue
            v = valuation_at(shift_z(s.c, pole), 0)
            if v < 0:
                return Offender(i, "x" if isinstance(s, ElemX) else "y", s.c, s.m, pole, v)
    return None


def _is_unit_det(a):
    d = a.det
    return d.is_const() and bool(d)


def _affine_polynomial(a):
    return all(v.is_polynomial() for v in step_coefficients(a))


def z_tame_attempt(e):
    """(steps, failure): steps over Q[z] if the gated peeling succeeds."""
    f, g, state = _peel_loop(e, gate=lambda c: c.is_polynomial())
    if state.failure is not None:
        state.failure["peeled_before"] = len(state.peeled)
        return None, state.failure
    a = _affine_of(f, g)
    if not _affine_polynomial(a) or not _is_unit_det(a):
        return None, {"affine": a, "reason": "affine part is not invertible over Q[z]"}
    lin = linear_z_tame_reduce([[v.as_poly() for v in row] for row in a.matrix])
    head = [s for s in lin if not s.is_identity()]
    if any(a.translation):
        # listed after the linear steps so the translation is not rotated
        head.append(Affine(((ONE, ZERO), (ZERO, ONE)), a.translation))
    return head + list(reversed(state.peeled)), None


def z_tame_decompose(e):
    steps, _ = z_tame_attempt(e)
    return steps


def _poly_rows(m):
    return [[v if isinstance(v, Poly) else RatFunc.coerce(v).as_poly() for v in row] for row in m]


def _matmul2(a, b):
    return [[a[i][0] * b[0][j] + a[i][1] * b[1][j] for j in range(2)] for i in range(2)]


def linear_z_tame_reduce(m):
    """Factor a 2x2 matrix over Q[z] with det in Q* into transvections.

    Returns Affine steps in application order whose composite is the linear
    map with matrix ``m`` (rows give the images of x and y).  The matrices of
    the returned steps multiply, in reverse order, to ``m``.
    """
    m = _poly_rows(m)
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if not det.is_const() or det.is_zero():
        raise NonUnitDeterminant(f"determinant {det} is not a nonzero constant")
    one, zero = Poly.const(1), Poly()
    factors = []  # inverse row operations, in order
    cur = [row[:] for row in m]

    def row_op(i, q):
        # row_{1-i} -= q * row_i ; its inverse is the transvection with +q
        j = 1 - i
        cur[j] = [cur[j][k] - q * cur[i][k] for k in range(2)]
        t = [[one, zero], [zero, one]]
        t[j][i] = q
        factors.append(t)

    while cur[0][0] and cur[1][0]:
        a, c = cur[0][0], cur[1][0]
        if a.degree >= c.degree:
            row_op(1, a // c)
        else:
            row_op(0, c // a)
    if not cur[0][0]:
        row_op(1, Poly.const(-1))  # row0 += row1
        row_op(0, one)             # row1 -= row0
    a, b, d = cur[0][0], cur[0][1], cur[1][1]
    inv_d = 1 / d.c[0]
    if b:
        factors.append([[one, b * inv_d], [zero, one]])
    factors.append([[a, zero], [zero, d]])
    steps = [Affine(tuple(tuple(RatFunc.coerce(v) for v in row) for row in t)) for t in reversed(factors)]
    return [s for s in steps if not s.is_identity()] or steps[:1]


def steps_matrix_product(steps):
    """Matrix of the linear part of a composite of linear Affine steps."""
    acc = [[ONE, ZERO], [ZERO, ONE]]
    for s in reversed(steps):
        acc = _matmul2(acc, [list(r) for r in s.matrix])
    return acc


def unimodular_completion(a, b):
    """(r, s) in Q[z] with a*s - b*r = 1, for coprime polynomials a, b."""
    g, s, t = poly_xgcd(a, b)
    if not g.is_one():
        return None
    # s*a + t*b = 1  ->  a*s - b*(-t) = 1
    return -t, s
