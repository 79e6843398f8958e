"""Noncommutative peeling: multilinear matching and elementary decomposition.

Matching solves ``u = H(v, ..., v)`` for a multilinear form
``H = sum q0 * t * q1 * t ... t * qm`` whose slots lie in a bounded finite
ansatz (denominators dividing ``Delta = D**max_den_power``).  All slots are
expressed over fixed denominators so that every word becomes an exponent
vector; H is then recovered by leading-term division, which is exact and
terminates because the leading exponent vector of the remainder strictly
decreases.
"""

from dataclasses import dataclass, field
from functools import total_ordering
import heapq
from itertools import product
import logging

from . import freealg
from .freealg import NCElement, X, Y, _lift, has_sandwich, highest_form, nc_degree
from .morphism import (
    Endo, LinearLeft, Scale, TailForm, TransvectX, TransvectY, compose, compose_all,
    invert_elementary, to_endo,
)
from .scalar import ONE, Poly, RatFunc, poly_gcd, poly_lcm

log = logging.getLogger(__name__)


@total_ordering
class _Desc:
    """Heap entry that pops the largest key first."""

    __slots__ = ("key",)

    def __init__(self, key):
        self.key = key

    def __eq__(self, other):
        return self.key == other.key

    def __lt__(self, other):
        return self.key > other.key


class DecompositionFailed(RuntimeError):
    def __init__(self, reason, residual=None):
        super().__init__(reason)
        self.reason = reason
        self.residual = residual


class SandwichPresent(ValueError):
    pass


@dataclass(frozen=True)
class MatchBounds:
    max_den_power: int
    max_num_degree: int

    def __post_init__(self):
        if self.max_den_power < 0 or self.max_num_degree < 0:
            raise ValueError("bounds must be non-negative")


def _slot_values(a):
    for t in a.terms():
        yield from t.slots


def _max_z_degree(*elems):
    d = 0
    for a in elems:
        for s in _slot_values(a):
            d = max(d, len(s.num.c) - 1, len(s.den.c) - 1)
    return d


def default_bounds(u, v, m=1):
    return MatchBounds(m + 2, 2 + _max_z_degree(u, v))


def _base_denominator(u, v):
    """z * lcm(denominators of u, v) * boundary numerators of v."""
    d = Poly.monomial(1)
    for a in (u, v):
        for skel in a.skeletons():
            for den in a.part(skel)[0]:
                d = poly_lcm(d, den)
    for side in ("left", "right"):
        for c in freealg.boundary_coefficients(v, side):
            if len(c.num.c) > 1:
                d = poly_lcm(d, c.num.monic())
    return d


def _common_terms(a, length):
    """Terms of a homogeneous element over per-position lcm denominators."""
    dens = [Poly.monomial(0)] * (length + 1)
    for skel in a.skeletons():
        for i, den in enumerate(a.part(skel)[0]):
            dens[i] = poly_lcm(dens[i], den)
    terms = []
    for skel in a.skeletons():
        d, c = a.part(skel)
        for e, v in _lift(d, c, tuple(dens)).items():
            terms.append((skel, e, v))
    return tuple(dens), terms


def _divides(d, t):
    return not (t % d).c


def solve_multilinear_match(u, v, m, bounds=None):
    """TailForm H with H(v, ..., v) = u exactly, or None within bounds."""
    u, v = NCElement.coerce(u), NCElement.coerce(v)
    if u.is_zero() or v.is_zero():
        return None
    if not freealg.is_homogeneous(u) or not freealg.is_homogeneous(v):
        raise ValueError("matching needs homogeneous u and v")
    d = nc_degree(v)
    if d < 1 or m < 1 or nc_degree(u) != m * d:
        return None
    bounds = bounds or default_bounds(u, v, m)
    delta = _base_denominator(u, v) ** bounds.max_den_power
    top = bounds.max_num_degree + (len(delta.c) - 1)

    vdens, vterms = _common_terms(v, d)
    target = []
    for j in range(m):
        for i in range(d):
            if i == 0:
                left = delta if j == 0 else vdens[d] * delta
                target.append((left * vdens[0]).monic())
            else:
                target.append(vdens[i])
    target.append((vdens[d] * delta).monic())
    target = tuple(target)

    rem = {}
    for skel in u.skeletons():
        dens, coeffs = u.part(skel)
        if not all(_divides(a, b) for a, b in zip(dens, target)):
            return None
        for e, c in _lift(dens, coeffs, target).items():
            rem[(skel, e)] = c

    lead_skel, lead_e, lead_c = max(vterms, key=lambda t: (t[0], t[1]))
    lead_scale = lead_c ** m
    want_skel = lead_skel * m
    # every product v-term choice, with zero slot shifts
    expansion = []
    for choice in product(vterms, repeat=m):
        ex = []
        coef = 1
        for j, (_, te, tc) in enumerate(choice):
            coef *= tc
            ex.append(te[0] + (ex.pop() if j else 0))
            ex.extend(te[1:])
        expansion.append(("".join(t[0] for t in choice), tuple(ex), coef))
    found = {}
    heap = [_Desc(k) for k in rem]
    heapq.heapify(heap)
    while rem:
        top_key = heapq.heappop(heap).key
        if top_key not in rem:
            continue
        (skel, e) = top_key
        c = rem[top_key]
        if skel != want_skel:
            return None
        s = []
        for j in range(m + 1):
            pos = j * d
            if any(e[pos + i] != lead_e[i] for i in range(1, d) if j < m):
                return None
            left = lead_e[d] if j > 0 else 0
            right = lead_e[0] if j < m else 0
            s.append(e[pos] - left - right)
        if any(x < 0 or x > top for x in s):
            return None
        s = tuple(s)
        h = c / lead_scale
        found[s] = found.get(s, 0) + h
        for key_skel, base, coef in expansion:
            ex = list(base)
            for j in range(m + 1):
                ex[j * d] += s[j]
            key = (key_skel, tuple(ex))
            coef = h * coef
            old = rem.get(key)
            w = (old or 0) - coef
            if w:
                if old is None:
                    heapq.heappush(heap, _Desc(key))
                rem[key] = w
            else:
                rem.pop(key, None)
    found = {s: h for s, h in found.items() if h}
    if not found:
        return None
    # minimise slot denominators of the whole tensor before splitting it up
    dens, coeffs = freealg._reduce((delta,) * (m + 1), found)
    summands = []
    for s in sorted(coeffs):
        slots = [RatFunc(Poly.monomial(k), den) for k, den in zip(s, dens)]
        slots[0] = slots[0] * coeffs[s]
        summands.append(tuple(slots))
    return TailForm(_compact(summands))


def _compact(summands):
    """Merge summands that agree in every slot but one (fewer, fatter slots)."""
    summands = [tuple(s) for s in summands]
    changed = True
    while changed and summands:
        changed = False
        for i in range(len(summands[0])):
            groups = {}
            for s in summands:
                key = s[:i] + s[i + 1:]
                groups[key] = groups.get(key, RatFunc.coerce(0)) + s[i]
            if len(groups) < len(summands):
                changed = True
                summands = [k[:i] + (v,) + k[i:] for k, v in groups.items() if not v.is_zero()]
                if not summands:
                    break
    return summands


def solve_proportional(u, v, bounds=None):
    """Pairs (p, q) with u = sum p * v * q, or None within bounds.

    None only means nothing was found inside the ansatz; it does not prove
    that u is not proportional to v.
    """
    tail = solve_multilinear_match(u, v, 1, bounds)
    if tail is None:
        return None
    grouped = {}
    for p, q in tail.summands:
        # split the scalar coefficient off p so equal left slots group together
        key = RatFunc(Poly.monomial(p.num.low_order()), p.den)
        grouped[key] = grouped.get(key, RatFunc.coerce(0)) + q * (p / key)
    return [(p, q) for p, q in sorted(grouped.items(), key=lambda pq: (pq[0].num.degree, str(pq[0])))
            if not q.is_zero()]


# decomposition ---------------------------------------------------------


@dataclass
class NCDecomposition:
    """Elementary steps in application order: the composite is s1 o s2 o ..."""

    steps: list = field(default_factory=list)

    def recompose(self):
        return compose_all([to_endo(s) for s in self.steps])

    def variables(self):
        """Moved variable of each transvection step, in order."""
        return ["y" if isinstance(s, TransvectY) else "x"
                for s in self.steps if isinstance(s, (TransvectX, TransvectY))]


def _rank_one(part):
    """(p, q) with part = p (x) q for a two-slot tensor, or None."""
    dens, coeffs = part
    rows = {}
    for (e0, e1), c in coeffs.items():
        rows.setdefault(e0, {})[e1] = c
    keys = sorted(rows)
    base = rows[keys[0]]
    b0 = min(base)
    ratios = {}
    for k in keys:
        row = rows[k]
        if row.keys() != base.keys():
            return None
        r = row[b0] / base[b0]
        if any(row[e] != r * base[e] for e in base):
            return None
        ratios[k] = r
    p = RatFunc(freealg._poly_from(ratios), dens[0])
    q = RatFunc(freealg._poly_from(base), dens[1])
    return p, q


def _linear_pieces(a):
    """Split a degree-1 element into its x and y parts."""
    if freealg.nc_degree(a) != 1 or set(a.skeletons()) - {"x", "y"}:
        return None
    return a.part("x"), a.part("y")


def _two_sided_summands(part):
    """Summands (p, q) of a two-slot tensor, one per left exponent."""
    dens, coeffs = part
    rows = {}
    for (e0, e1), c in coeffs.items():
        rows.setdefault(e0, {})[e1] = c
    return [(RatFunc(Poly.monomial(e0), dens[0]), RatFunc(freealg._poly_from(row), dens[1]))
            for e0, row in sorted(rows.items())]


def _linear_steps(f, g):
    """Express a linear automorphism with the available step types."""
    pf, pg = _linear_pieces(f), _linear_pieces(g)
    if pf is None or pg is None:
        raise DecompositionFailed("linear residual has constant terms or is not linear", Endo(f, g))
    (fx, fy), (gx, gy) = pf, pg
    if fx is not None and gy is not None:
        sx, sy = _rank_one(fx), _rank_one(gy)
        if sx and sy and fy is None and gx is None:
            return [Scale(sx[0], sx[1], sy[0], sy[1])]
        if sx and sy and fy is None:
            # g = r y s + K(x)
            tail = TailForm([(a / sx[0], b / sx[1]) for a, b in _two_sided_summands(gx)])
            return [Scale(sx[0], sx[1], 1, 1), TransvectY(sy[0], sy[1], tail)]
        if sx and sy and gx is None:
            tail = TailForm([(a / sy[0], b / sy[1]) for a, b in _two_sided_summands(fy)])
            return [Scale(1, 1, sy[0], sy[1]), TransvectX(sx[0], sx[1], tail)]
    left = []
    for part in (fx, fy, gx, gy):
        if part is None:
            left.append(RatFunc.coerce(0))
            continue
        dens, coeffs = part
        if not dens[1].is_one() or any(e1 for _, e1 in coeffs):
            left = None
            break
        left.append(RatFunc(freealg._poly_from({e0: c for (e0, _), c in coeffs.items()}), dens[0]))
    if left is not None:
        try:
            return [LinearLeft(((left[0], left[1]), (left[2], left[3])))]
        except ValueError:
            pass
    raise DecompositionFailed("linear residual is not a supported linear automorphism", Endo(f, g))


def nc_decompose(e, bounds=None):
    """Alternating elementary decomposition of an automorphism.

    Repeatedly subtracts ``H(f)`` from the higher-degree image, where the
    highest form of that image equals ``H(f+, ..., f+)``.  Ties try the
    y-image first.  Consecutive peels of the same variable merge into one
    step.  ``bounds`` fixes the matching ansatz (default: per match).
    """
    f, g = e.image_x, e.image_y
    peeled = []  # (variable, TailForm) in peeling order
    while True:
        df, dg = nc_degree(f), nc_degree(g)
        if df < 1 or dg < 1:
            raise DecompositionFailed("an image has degree < 1", Endo(f, g))
        if df + dg <= 2:
            break
        done = False
        for side in ("y", "x"):
            hi, lo = (g, f) if side == "y" else (f, g)
            dh, dl = nc_degree(hi), nc_degree(lo)
            if dh < dl or dh % dl:
                continue
            m = dh // dl
            u, v = highest_form(hi), highest_form(lo)
            tail = solve_multilinear_match(u, v, m, bounds or default_bounds(u, v, m))
            if tail is None:
                continue
            reduced = hi - tail.evaluate(lo)
            if nc_degree(reduced) >= dh:
                continue
            if side == "y":
                g = reduced
            else:
                f = reduced
            if peeled and peeled[-1][0] == side:
                peeled[-1] = (side, TailForm(peeled[-1][1].summands + tail.summands))
            else:
                peeled.append((side, tail))
            done = True
            break
        if not done:
            raise DecompositionFailed(
                f"no multilinear match within bounds at degrees ({df}, {dg})", Endo(f, g))
    steps = [s for s in _linear_steps(f, g) if not (isinstance(s, Scale) and s.is_identity())]
    for side, tail in reversed(peeled):
        steps.append(TransvectY(ONE, ONE, tail) if side == "y" else TransvectX(ONE, ONE, tail))
    return NCDecomposition(steps)


def replay(d):
    """Prefix composites: identity, s1, s1 o s2, ..."""
    steps = d.steps if isinstance(d, NCDecomposition) else d
    stages = [Endo.identity()]
    for s in steps:
        stages.append(compose(stages[-1], to_endo(s)))
    return stages


# coefficient improving ------------------------------------------------


def _content(values):
    """gcd of numerators over lcm of denominators, as a monic rational function."""
    g, l = Poly(), Poly.monomial(0)
    for v in values:
        g = poly_gcd(g, v.num)
        l = poly_lcm(l, v.den)
    return RatFunc(g, l)


def boundary_content(a, side):
    return _content(freealg.boundary_coefficients(a, side))


def improving_scale(stage):
    """Scale making each image's left and right coefficients primitive polynomials."""
    f, g = stage.images()
    return Scale(boundary_content(f, "left").inverse(), boundary_content(f, "right").inverse(),
                 boundary_content(g, "left").inverse(), boundary_content(g, "right").inverse())


def scale_tail(tail, left, right, a, b):
    """Tail of left * H(a^-1 * t * b^-1) * right written as a tail in t.

    Uses M_q(p t q) = p * M_{q q_i p}(t) * q with p = a^-1, q = b^-1.
    """
    ia, ib = a.inverse(), b.inverse()
    out = []
    for qs in tail.summands:
        new = [left * qs[0] * ia]
        new.extend(ib * q * ia for q in qs[1:-1])
        new.append(qs[-1] * ib * right)
        out.append(new)
    return TailForm(out)


def _conjugate_transvection(t, prev, cur):
    """prev^-1 o t o cur for a transvection fixing one letter (scales agree there)."""
    if isinstance(t, TransvectY):
        if (prev.p1, prev.q1) != (cur.p1, cur.q1):
            return None
        r = cur.p2 * t.r * prev.p2.inverse()
        rp = prev.q2.inverse() * t.r_prime * cur.q2
        return TransvectY(r, rp, scale_tail(t.tail, cur.p2, cur.q2, prev.p1, prev.q1))
    if (prev.p2, prev.q2) != (cur.p2, cur.q2):
        return None
    q = cur.p1 * t.q * prev.p1.inverse()
    qp = prev.q1.inverse() * t.q_prime * cur.q1
    return TransvectX(q, qp, scale_tail(t.tail, cur.p1, cur.q1, prev.p2, prev.q2))


def coefficient_improve(d):
    """Equivalent decomposition whose stages have primitive polynomial boundaries.

    Every stage ``S_i`` is replaced by ``S_i o sigma_i`` for the scaling
    ``sigma_i`` clearing boundary contents; a trailing Scale restores the
    composite when the final stage itself is not primitive.
    """
    stages = replay(d)
    for i, st in enumerate(stages):
        if has_sandwich(st.image_x) or has_sandwich(st.image_y):
            raise SandwichPresent(f"stage {i} contains a sandwich")
    prev = Scale(1, 1, 1, 1)
    out = []
    for t, st in zip(d.steps, stages[1:]):
        cur = improving_scale(st)
        if isinstance(t, (TransvectX, TransvectY)):
            new = _conjugate_transvection(t, prev, cur)
            if new is None:
                raise ValueError("transvection changed the scaling of its fixed letter")
            out.append(new)
        elif isinstance(t, Scale):
            out.append(Scale(cur.p1 * t.p1 / prev.p1, t.q1 * cur.q1 / prev.q1,
                             cur.p2 * t.p2 / prev.p2, t.q2 * cur.q2 / prev.q2))
        elif isinstance(t, LinearLeft) and prev.is_identity() and cur.q1.is_one() and cur.q2.is_one():
            (a, b), (c, dd) = t.matrix
            out.append(LinearLeft(((cur.p1 * a, cur.p1 * b), (cur.p2 * c, cur.p2 * dd))))
        else:
            out.append(invert_elementary(prev))
            out.append(t)
            out.append(cur)
        prev = cur
    if not prev.is_identity():
        out.append(invert_elementary(prev))
    return NCDecomposition(out)


def boundary_report(stage):
    """(all boundary coefficients polynomial, jointly coprime) for a stage."""
    vals = []
    for a in stage.images():
        for side in ("left", "right"):
            vals.extend(freealg.boundary_coefficients(a, side))
    polynomial = all(v.is_polynomial() for v in vals)
    g = Poly()
    for v in vals:
        g = poly_gcd(g, v.num)
    return polynomial, polynomial and g.is_one()


def side_report(stage):
    """Per side: (polynomial, coprime) for the left and right boundary sets."""
    out = {}
    for side in ("left", "right"):
        vals = []
        for a in stage.images():
            vals.extend(freealg.boundary_coefficients(a, side))
        polynomial = all(v.is_polynomial() for v in vals)
        g = Poly()
        for v in vals:
            g = poly_gcd(g, v.num)
        out[side] = (polynomial, polynomial and g.is_one())
    return out
