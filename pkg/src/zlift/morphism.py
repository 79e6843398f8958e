"""Endomorphisms of Q(z) * Q<x, y> fixing z, and elementary automorphisms.

Composition convention: ``compose(outer, inner)(t) = outer(inner(t))``.
A list of steps ``[s1, ..., sn]`` always means ``s1 o ... o sn``.
"""

from dataclasses import dataclass

from . import freealg
from .commutative import CommEndo
from .freealg import NCElement, X, Y, substitute
from .scalar import ONE, RatFunc


@dataclass(frozen=True)
class Endo:
    image_x: NCElement
    image_y: NCElement

    @classmethod
    def identity(cls):
        return cls(X, Y)

    def images(self):
        return self.image_x, self.image_y

    def degree(self):
        return freealg.nc_degree(self.image_x) + freealg.nc_degree(self.image_y)

    def is_identity(self):
        return self.image_x == X and self.image_y == Y


def apply(e, a):
    return substitute(a, e.image_x, e.image_y)


def compose(outer, inner):
    return Endo(apply(outer, inner.image_x), apply(outer, inner.image_y))


def compose_all(endos):
    acc = Endo.identity()
    for e in endos:
        acc = compose(acc, e)
    return acc


@dataclass(frozen=True)
class TailForm:
    """Sum of words q0 v q1 v ... v qm in a single letter v."""

    summands: tuple

    def __post_init__(self):
        s = tuple(tuple(RatFunc.coerce(q) for q in qs) for qs in self.summands)
        for qs in s:
            if len(qs) < 2:
                raise ValueError("tail summands need at least one letter")
            if any(q.is_zero() for q in qs):
                raise ValueError("tail coefficients must be nonzero")
        object.__setattr__(self, "summands", s)

    @classmethod
    def power(cls, m, coeff=1):
        return cls(((RatFunc.coerce(coeff),) + (ONE,) * m,))

    def materialize(self, letter):
        return NCElement.from_terms((letter * (len(qs) - 1), qs) for qs in self.summands)

    def evaluate(self, v):
        """H(v, ..., v) for an arbitrary element v."""
        total = NCElement()
        for qs in self.summands:
            acc = NCElement.scalar(qs[0])
            for q in qs[1:]:
                acc = acc * v * NCElement.scalar(q)
            total = total + acc
        return total

    def degrees(self):
        return sorted({len(qs) - 1 for qs in self.summands})

    def scaled(self, left, right):
        """left * H * right (boundary coefficients absorb the scalars)."""
        out = []
        for qs in self.summands:
            qs = list(qs)
            qs[0] = qs[0] * left
            qs[-1] = qs[-1] * right
            out.append(qs)
        return TailForm(out)

    def __neg__(self):
        return self.scaled(-1, 1)

    def split_linear(self):
        """(degree-1 summands, higher summands)."""
        lin = [qs for qs in self.summands if len(qs) == 2]
        rest = [qs for qs in self.summands if len(qs) > 2]
        return TailForm(lin), TailForm(rest)


@dataclass(frozen=True)
class TransvectY:
    """x -> x,  y -> r*y*r' + tail(x)."""

    r: RatFunc
    r_prime: RatFunc
    tail: TailForm

    def endo(self):
        img = NCElement.word("y", (self.r, self.r_prime)) + self.tail.materialize("x")
        return Endo(X, img)


@dataclass(frozen=True)
class TransvectX:
    """x -> q*x*q' + tail(y),  y -> y."""

    q: RatFunc
    q_prime: RatFunc
    tail: TailForm

    def endo(self):
        img = NCElement.word("x", (self.q, self.q_prime)) + self.tail.materialize("y")
        return Endo(img, Y)


@dataclass(frozen=True)
class Scale:
    """x -> p1*x*q1,  y -> p2*y*q2."""

    p1: RatFunc
    q1: RatFunc
    p2: RatFunc
    q2: RatFunc

    def __post_init__(self):
        for name in ("p1", "q1", "p2", "q2"):
            v = RatFunc.coerce(getattr(self, name))
            if v.is_zero():
                raise ValueError("scale coefficients must be nonzero")
            object.__setattr__(self, name, v)

    def endo(self):
        return Endo(NCElement.word("x", (self.p1, self.q1)), NCElement.word("y", (self.p2, self.q2)))

    def is_identity(self):
        return all(v.is_one() for v in (self.p1, self.q1, self.p2, self.q2))


@dataclass(frozen=True)
class LinearLeft:
    """x -> a*x + b*y,  y -> c*x + d*y with left coefficients."""

    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(RatFunc.coerce(v) for v in row) for row in self.matrix)
        (a, b), (c, d) = m
        if (a * d - b * c).is_zero():
            raise ValueError("LinearLeft needs a nonzero determinant")
        object.__setattr__(self, "matrix", m)

    def endo(self):
        (a, b), (c, d) = self.matrix
        sx = NCElement.scalar
        return Endo(sx(a) * X + sx(b) * Y, sx(c) * X + sx(d) * Y)


ElementaryAuto = (TransvectY, TransvectX, Scale, LinearLeft)


def _coerce_tail(tail):
    return tail if isinstance(tail, TailForm) else TailForm(tail)


def transvect_y(tail, r=1, r_prime=1):
    return TransvectY(RatFunc.coerce(r), RatFunc.coerce(r_prime), _coerce_tail(tail))


def transvect_x(tail, q=1, q_prime=1):
    return TransvectX(RatFunc.coerce(q), RatFunc.coerce(q_prime), _coerce_tail(tail))


def to_endo(s):
    return s.endo()


def invert_elementary(s):
    if isinstance(s, (TransvectY, TransvectX)):
        a, b = (s.r, s.r_prime) if isinstance(s, TransvectY) else (s.q, s.q_prime)
        ia, ib = a.inverse(), b.inverse()
        tail = s.tail.scaled(-ia, ib)
        return type(s)(ia, ib, tail)
    if isinstance(s, Scale):
        return Scale(s.p1.inverse(), s.q1.inverse(), s.p2.inverse(), s.q2.inverse())
    if isinstance(s, LinearLeft):
        (a, b), (c, d) = s.matrix
        det = a * d - b * c
        return LinearLeft(((d / det, -b / det), (-c / det, a / det)))
    raise TypeError(f"not an elementary automorphism: {s!r}")


def conjugate(phi, by):
    """B o phi o B^-1 with B = by[0] o by[1] o ...."""
    b = compose_all([to_endo(s) for s in by])
    b_inv = compose_all([to_endo(invert_elementary(s)) for s in reversed(by)])
    return compose(b, compose(phi, b_inv))


def is_z_polynomial(e):
    """Whether every slot of both images lies in Q[z]."""
    for a in e.images():
        for skel in a.skeletons():
            dens, _ = a.part(skel)
            if any(len(d.c) > 1 for d in dens):
                return False
    return True


def abelianize_endo(e):
    return CommEndo(freealg.abelianize(e.image_x), freealg.abelianize(e.image_y))


def lift_comm_step(step):
    """The verbatim noncommutative lift of a commutative step (coefficients on the left)."""
    from .commutative import Affine, ElemX, ElemY

    sx = NCElement.scalar
    if isinstance(step, ElemX):
        return Endo(X + sx(step.c) * Y ** step.m, Y)
    if isinstance(step, ElemY):
        return Endo(X, Y + sx(step.c) * X ** step.m)
    if isinstance(step, Affine):
        (a, b), (c, d) = step.matrix
        t1, t2 = step.translation
        return Endo(sx(a) * X + sx(b) * Y + sx(t1), sx(c) * X + sx(d) * Y + sx(t2))
    raise TypeError(f"not a commutative step: {step!r}")
