"""The coproduct Q(z) * Q<x, y>: words in x, y with rational-function slots.

A word ``q0 v1 q1 ... vk qk`` has a *skeleton* ``v1...vk`` (a string over
"xy") and ``k + 1`` slots in Q(z).  Elements are stored per skeleton as a
tensor in Q(z)^(k+1) over Q: each slot position ``i`` carries one monic
denominator ``D_i`` and every term is ``c * z^e0/D_0 (x) ... (x) z^ek/D_k``.
The denominators are kept minimal (``D_i`` shares no factor with the span of
numerators at position ``i``), which makes the representation canonical:
equality is structural and zero is the empty element.
"""

from collections import namedtuple
from fractions import Fraction
import math
import random

from .scalar import INF, ONE_POLY, Poly, RatFunc, poly_gcd, poly_lcm, shift_z

Term = namedtuple("Term", "skeleton slots")


class ZeroElement(ValueError):
    pass


class PoleHit(ArithmeticError):
    """A slot denominator is singular at the sampled value of z."""


def _is_zmono(p):
    # monic z^a
    c = p.c
    return c[-1] == 1 and not any(c[:-1])


def _poly_from(exps):
    if not exps:
        return Poly()
    n = max(exps) + 1
    cs = [Fraction(0)] * n
    for e, v in exps.items():
        cs[e] = v
    return Poly(cs)


def _reduce(dens, coeffs):
    """Minimise every slot denominator; returns (dens, coeffs) or None."""
    if not coeffs:
        return None
    dens = list(dens)
    for i, d in enumerate(dens):
        if len(d.c) == 1:
            continue
        if _is_zmono(d):
            a = len(d.c) - 1
            r = min(a, min(e[i] for e in coeffs))
            if r:
                coeffs = {e[:i] + (e[i] - r,) + e[i + 1:]: v for e, v in coeffs.items()}
                dens[i] = Poly.monomial(a - r)
            continue
        groups = {}
        for e, v in coeffs.items():
            groups.setdefault(e[:i] + e[i + 1:], {})[e[i]] = v
        g = d
        for grp in groups.values():
            g = poly_gcd(g, _poly_from(grp))
            if g.is_one():
                break
        if g.is_one():
            continue
        dens[i] = d // g
        out = {}
        for rest, grp in groups.items():
            q = _poly_from(grp) // g
            for k, v in enumerate(q.c):
                if v:
                    out[rest[:i] + (k,) + rest[i:]] = v
        coeffs = out
    return tuple(dens), coeffs


def _lift(dens, coeffs, target):
    """Re-express a part over denominators ``target`` (each a multiple)."""
    for i, (d, t) in enumerate(zip(dens, target)):
        if d == t:
            continue
        m = t // d
        nz = [(k, v) for k, v in enumerate(m.c) if v]
        if len(nz) == 1:
            k, v = nz[0]
            coeffs = {e[:i] + (e[i] + k,) + e[i + 1:]: c * v for e, c in coeffs.items()}
            continue
        out = {}
        for e, c in coeffs.items():
            for k, v in nz:
                key = e[:i] + (e[i] + k,) + e[i + 1:]
                out[key] = out.get(key, 0) + c * v
        coeffs = {e: v for e, v in out.items() if v}
    return coeffs


def _add_parts(p, q):
    (d1, c1), (d2, c2) = p, q
    if d1 == d2:
        out = dict(c1)
        for e, v in c2.items():
            w = out.get(e, 0) + v
            if w:
                out[e] = w
            else:
                del out[e]
        return _reduce(d1, out)
    target = tuple(poly_lcm(a, b) for a, b in zip(d1, d2))
    out = dict(_lift(d1, c1, target))
    for e, v in _lift(d2, c2, target).items():
        w = out.get(e, 0) + v
        if w:
            out[e] = w
        else:
            del out[e]
    return _reduce(target, out)


def _mul_parts(p, q):
    (d1, c1), (d2, c2) = p, q
    k = len(d1) - 1
    dens = d1[:-1] + ((d1[-1] * d2[0]).monic(),) + d2[1:]
    out = {}
    for e1, v1 in c1.items():
        head, last = e1[:-1], e1[-1]
        for e2, v2 in c2.items():
            key = head + (last + e2[0],) + e2[1:]
            w = out.get(key, 0) + v1 * v2
            if w:
                out[key] = w
            else:
                del out[key]
    res = _reduce(dens, out)
    return res


def _ratfunc_part(r):
    r = RatFunc.coerce(r)
    return (r.den,), {(k,): v for k, v in enumerate(r.num.c) if v}


class NCElement:
    """Immutable element of Q(z) * Q<x, y> in canonical form."""

    __slots__ = ("_parts", "_h")

    def __init__(self, parts=None):
        self._parts = parts or {}
        self._h = None

    # construction -----------------------------------------------------

    @classmethod
    def scalar(cls, r):
        r = RatFunc.coerce(r)
        if r.is_zero():
            return cls()
        return cls({"": _ratfunc_part(r)})

    @classmethod
    def letter(cls, v):
        if v not in ("x", "y"):
            raise ValueError(f"unknown letter {v!r}")
        return cls({v: ((ONE_POLY, ONE_POLY), {(0, 0): Fraction(1)})})

    @classmethod
    def word(cls, skeleton, slots):
        """The single word q0 v1 q1 ... vk qk."""
        slots = [RatFunc.coerce(s) for s in slots]
        if len(slots) != len(skeleton) + 1:
            raise ValueError("a word with k letters needs k + 1 slots")
        if any(s.is_zero() for s in slots):
            return cls()
        coeffs = {(): Fraction(1)}
        for s in slots:
            nz = [(k, v) for k, v in enumerate(s.num.c) if v]
            coeffs = {e + (k,): c * v for e, c in coeffs.items() for k, v in nz}
        part = _reduce(tuple(s.den for s in slots), coeffs)
        return cls({skeleton: part})

    @classmethod
    def from_terms(cls, terms):
        acc = {}
        for skel, slots in terms:
            w = cls.word(skel, slots)
            for s, p in w._parts.items():
                if s in acc:
                    r = _add_parts(acc[s], p)
                    if r is None:
                        del acc[s]
                    else:
                        acc[s] = r
                else:
                    acc[s] = p
        return cls(acc)

    @staticmethod
    def coerce(v):
        if isinstance(v, NCElement):
            return v
        return NCElement.scalar(v)

    # structure ----------------------------------------------------------

    def is_zero(self):
        return not self._parts

    def __bool__(self):
        return bool(self._parts)

    def skeletons(self):
        return sorted(self._parts, key=lambda s: (len(s), s))

    def part(self, skeleton):
        return self._parts.get(skeleton)

    def terms(self):
        """Canonical term list; the rational coefficient sits in slot 0."""
        out = []
        for skel in self.skeletons():
            dens, coeffs = self._parts[skel]
            for e in sorted(coeffs):
                slots = [RatFunc(Poly.monomial(k), d) for k, d in zip(e, dens)]
                slots[0] = slots[0] * coeffs[e]
                out.append(Term(skel, tuple(slots)))
        return out

    def num_terms(self):
        return sum(len(c) for _, c in self._parts.values())

    def __eq__(self, other):
        if not isinstance(other, NCElement):
            try:
                other = NCElement.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self._parts.keys() != other._parts.keys():
            return False
        for s, (d, c) in self._parts.items():
            d2, c2 = other._parts[s]
            if d != d2 or c != c2:
                return False
        return True

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(
                (s, d, frozenset(c.items())) for s, (d, c) in self._parts.items()))
        return self._h

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = NCElement.coerce(other)
        if not other._parts:
            return self
        if not self._parts:
            return other
        acc = dict(self._parts)
        for s, p in other._parts.items():
            if s in acc:
                r = _add_parts(acc[s], p)
                if r is None:
                    del acc[s]
                else:
                    acc[s] = r
            else:
                acc[s] = p
        return NCElement(acc)

    __radd__ = __add__

    def __neg__(self):
        return NCElement({s: (d, {e: -v for e, v in c.items()}) for s, (d, c) in self._parts.items()})

    def __sub__(self, other):
        return self + (-NCElement.coerce(other))

    def __rsub__(self, other):
        return NCElement.coerce(other) - self

    def __mul__(self, other):
        other = NCElement.coerce(other)
        acc = {}
        for s1, p1 in self._parts.items():
            for s2, p2 in other._parts.items():
                r = _mul_parts(p1, p2)
                if r is None:
                    continue
                s = s1 + s2
                if s in acc:
                    r = _add_parts(acc[s], r)
                    if r is None:
                        del acc[s]
                        continue
                acc[s] = r
        return NCElement(acc)

    def __rmul__(self, other):
        return NCElement.coerce(other) * self

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a noncommutative element")
        r = ONE_NC
        for _ in range(n):
            r = r * self
        return r

    def __repr__(self):
        return f"NCElement({render(self)!r})"

    def __str__(self):
        return render(self)

    # maps ---------------------------------------------------------------

    def map_slots(self, fn):
        """Apply a ring map of Q(z) to every slot of every word."""
        return NCElement.from_terms((t.skeleton, [fn(s) for s in t.slots]) for t in self.terms())


ONE_NC = NCElement.scalar(1)
X = NCElement.letter("x")
Y = NCElement.letter("y")


def nc_add(a, b):
    return NCElement.coerce(a) + NCElement.coerce(b)


def nc_mul(a, b):
    return NCElement.coerce(a) * NCElement.coerce(b)


def nc_is_zero(a):
    return NCElement.coerce(a).is_zero()


def nc_degree(a):
    """Number of letters in the longest word (-inf for zero)."""
    if not a._parts:
        return -INF
    return max(len(s) for s in a._parts)


def weight_degree(a, r, s):
    if r < 1 or s < 1:
        raise ValueError("weights must be positive")
    if not a._parts:
        return -INF
    return max(r * w.count("x") + s * w.count("y") for w in a._parts)


def homogeneous_part(a, d):
    return NCElement({s: p for s, p in a._parts.items() if len(s) == d})


def highest_form(a):
    if not a._parts:
        raise ZeroElement("the zero element has no highest form")
    return homogeneous_part(a, nc_degree(a))


def is_homogeneous(a):
    return len({len(s) for s in a._parts}) <= 1


def constant_part(a):
    return homogeneous_part(a, 0)


def _substitute_part(skel, dens, coeffs, images, cache):
    # left-to-right trie over exponent tuples: share common prefixes
    def scal(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = NCElement({"": ((dens[i],), {(k,): Fraction(1)})})
        return cache[key]

    def rec(i, items):
        # items: list of (exponent tuple, coefficient); positions < i consumed
        groups = {}
        for e, c in items:
            groups.setdefault(e[i], []).append((e, c))
        total = NCElement()
        for k, grp in groups.items():
            if i == len(skel):
                total = total + scal(i, k) * sum(c for _, c in grp)
            else:
                total = total + scal(i, k) * images[skel[i]] * rec(i + 1, grp)
        return total

    return rec(0, list(coeffs.items()))


def substitute(a, img_x, img_y):
    """Image of ``a`` under x -> img_x, y -> img_y (slots stay in place)."""
    images = {"x": NCElement.coerce(img_x), "y": NCElement.coerce(img_y)}
    total = NCElement()
    for skel, (dens, coeffs) in a._parts.items():
        total = total + _substitute_part(skel, dens, coeffs, images, {})
    return total


def has_sandwich(a):
    """True iff some word needs a non-polynomial interior slot."""
    for dens, _ in a._parts.values():
        for d in dens[1:-1]:
            if len(d.c) > 1:
                return True
    return False


def _boundary_degree(a, pos):
    best = INF
    for dens, coeffs in a._parts.values():
        d = dens[pos]
        shift = d.root_multiplicity(0) if len(d.c) > 1 else 0
        lo = min(e[pos] for e in coeffs)
        best = min(best, lo - shift)
    return best


def right_z_degree(a):
    """Smallest z-adic valuation among right boundary coefficients."""
    return _boundary_degree(a, -1)


def left_z_degree(a):
    return _boundary_degree(a, 0)


def boundary_coefficients(a, side="left"):
    """The boundary coefficients of ``a`` on one side, as rational functions.

    Each skeleton contributes the polynomials ``N_j`` in ``sum N_j/D (x) rest_j``
    (rest_j running over independent tensors), divided by the common ``D``.
    """
    pos = 0 if side == "left" else -1
    out = []
    for dens, coeffs in a._parts.values():
        k = len(dens)
        i = pos % k
        groups = {}
        for e, v in coeffs.items():
            groups.setdefault(e[:i] + e[i + 1:], {})[e[i]] = v
        for rest in sorted(groups):
            out.append(RatFunc(_poly_from(groups[rest]), dens[i]))
    return out


def shift_all_z(a, c):
    c = Fraction(c)
    if not c:
        return a
    return a.map_slots(lambda r: shift_z(r, c))


def abelianize(a):
    """Commutative image in Q(z)[x, y]."""
    from .commutative import CommPoly

    acc = {}
    for skel, (dens, coeffs) in a._parts.items():
        key = (skel.count("x"), skel.count("y"))
        den = ONE_POLY
        for d in dens:
            den = den * d
        num = {}
        for e, v in coeffs.items():
            s = sum(e)
            num[s] = num.get(s, 0) + v
        r = RatFunc(_poly_from(num), den)
        acc[key] = acc[key] + r if key in acc else r
    return CommPoly(acc)


# matrix evaluation oracle ----------------------------------------------


def _mat_mul(a, b):
    n = len(a)
    bt = list(zip(*b))
    return tuple(tuple(sum(a[i][k] * bt[j][k] for k in range(n)) for j in range(n)) for i in range(n))


def _mat_identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _mat_add(a, b):
    return tuple(tuple(u + v for u, v in zip(r, s)) for r, s in zip(a, b))


def _mat_scale(a, c):
    return tuple(tuple(u * c for u in r) for r in a)


def _mat_inv(a):
    n = len(a)
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [u - f * v for u, v in zip(m[r], m[col])]
    return tuple(tuple(r[n:]) for r in m)


def _poly_at(p, mat, powers):
    n = len(mat)
    acc = tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))
    for k, v in enumerate(p.c):
        if v:
            acc = _mat_add(acc, _mat_scale(_pow(mat, k, powers), v))
    return acc


def _pow(mat, k, powers):
    while len(powers) <= k:
        powers.append(_mat_mul(powers[-1], mat))
    return powers[k]


def oracle_dimension(a):
    """Smallest matrix size allowed for a: ceil((deg + 2) / 2), at least 2."""
    d = nc_degree(a)
    if d == -INF:
        d = 0
    return max(2, math.ceil((d + 2) / 2))


def random_matrices(dim, seed, spread=5):
    rng = random.Random(seed)

    def m():
        return tuple(tuple(Fraction(rng.randint(-spread, spread)) for _ in range(dim)) for _ in range(dim))

    return m(), m(), m()


def eval_matrices(a, dim, seed):
    """Evaluate at random rational matrices for x, y and z.

    z goes to a matrix as well (not a scalar): a scalar z would identify
    ``x*z`` with ``z*x``.  Raises PoleHit when a slot denominator is singular.
    """
    if dim < oracle_dimension(a):
        raise ValueError(f"dimension {dim} too small for degree {nc_degree(a)}")
    mx, my, mz = random_matrices(dim, seed)
    letters = {"x": mx, "y": my}
    powers = [_mat_identity(dim)]
    inv_cache = {}

    def inv_den(d):
        if d not in inv_cache:
            if d.is_one():
                inv_cache[d] = powers[0]
            else:
                inv = _mat_inv(_poly_at(d, mz, powers))
                if inv is None:
                    raise PoleHit(f"{d} is singular at the sampled z")
                inv_cache[d] = inv
        return inv_cache[d]

    total = tuple(tuple(Fraction(0) for _ in range(dim)) for _ in range(dim))
    for skel, (dens, coeffs) in a._parts.items():
        invs = [inv_den(d) for d in dens]
        for e, c in coeffs.items():
            acc = _mat_mul(_pow(mz, e[0], powers), invs[0])
            for i, v in enumerate(skel, start=1):
                acc = _mat_mul(acc, letters[v])
                acc = _mat_mul(acc, _mat_mul(_pow(mz, e[i], powers), invs[i]))
            total = _mat_add(total, _mat_scale(acc, c))
    return total


def matrix_is_zero(m):
    return not any(v for row in m for v in row)


def oracle_is_zero(a, seeds=(0, 1, 2), dim=None):
    """(zero?, seeds used): evaluation at random matrices, one vote per seed.

    A seed whose z-matrix hits a pole is replaced by the next unused seed.
    ``a`` counts as zero only if every evaluation vanishes.
    """
    dim = dim or oracle_dimension(a)
    used = []
    candidate = max(seeds) + 1
    pending = list(seeds)
    while pending:
        seed = pending.pop(0)
        try:
            m = eval_matrices(a, dim, seed)
        except PoleHit:
            pending.append(candidate)
            candidate += 1
            continue
        used.append(seed)
        if not matrix_is_zero(m):
            return False, used
    return True, used


# rendering ------------------------------------------------------------


def _render_slot(r):
    s = str(r)
    return s if s.isdigit() or s == "z" else f"({s})"


def render(a):
    """Canonical text: ``q0 * v1 * q1 * ... * vk * qk`` with unit slots elided."""
    if not a._parts:
        return "0"
    out = []
    for t in a.terms():
        pieces = []
        for i, s in enumerate(t.slots):
            if not s.is_one() or (i == 0 and not t.skeleton):
                pieces.append(_render_slot(s))
            if i < len(t.skeleton):
                pieces.append(t.skeleton[i])
        out.append(" * ".join(pieces))
    return " + ".join(out)
