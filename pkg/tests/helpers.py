import random
from fractions import Fraction

from zlift.commutative import Affine, ElemX, ElemY
from zlift.freealg import NCElement
from zlift.morphism import Scale, TailForm, transvect_x, transvect_y
from zlift.scalar import ONE, Z, Poly, RatFunc

SLOTS = [ONE, Z, 1 / Z, Z + 1, 1 / (Z - 1), (Z * Z + 1) / Z, RatFunc.coerce(Fraction(-3, 2)),
         RatFunc.coerce(2), Z * Z - 2, 1 / (Z + 2)]


def rng(seed):
    return random.Random(seed)


def rand_poly(r, deg=3, spread=4):
    return Poly([Fraction(r.randint(-spread, spread)) for _ in range(r.randint(0, deg) + 1)])


def rand_ratfunc(r, nonzero=True):
    while True:
        num = rand_poly(r)
        den = rand_poly(r, deg=2)
        if den.degree < 0 or (nonzero and num.degree < 0):
            continue
        return RatFunc(num, den)


def rand_word(r, max_deg=4, slots=SLOTS):
    k = r.randint(0, max_deg)
    skel = "".join(r.choice("xy") for _ in range(k))
    return NCElement.word(skel, [r.choice(slots) for _ in range(k + 1)])


def rand_element(r, max_deg=4, max_terms=4, slots=SLOTS):
    total = NCElement()
    for _ in range(r.randint(1, max_terms)):
        total = total + rand_word(r, max_deg, slots)
    return total


def monomial_slot(r, lo=-2, hi=2, coeffs=(1, -1, 2)):
    k = r.randint(lo, hi)
    c = r.choice(coeffs)
    return c * Z ** k if k >= 0 else RatFunc.coerce(c) / Z ** (-k)


def rand_tail(r, deg, summands=2, lo=-2, hi=2):
    return TailForm([tuple(monomial_slot(r, lo, hi) for _ in range(deg + 1))
                     for _ in range(r.randint(1, summands))])


def rand_alternating(r, max_steps=5, max_tail=3, degree_cap=12, lo=-2, hi=2):
    """Scale followed by alternating transvections; product of tail degrees capped."""
    steps = [Scale(*(monomial_slot(r, lo, hi) for _ in range(4)))]
    side = r.choice("xy")
    prod = 1
    for _ in range(r.randint(1, max_steps - 1)):
        d = r.randint(2, max_tail)
        if prod * d > degree_cap:
            break
        prod *= d
        tail = rand_tail(r, d, lo=lo, hi=hi)
        steps.append(transvect_y(tail) if side == "y" else transvect_x(tail))
        side = "x" if side == "y" else "y"
    return steps


def rand_comm_steps(r, n=4, coeff=None, degree_cap=9):
    """Random elementary steps over Q(z) with degrees 2..3; product of degrees capped."""
    coeff = coeff or (lambda: r.choice([Z, 1 / Z, Z + 1, RatFunc.coerce(2), 1 / (Z - 1)]))
    out = [Affine(((ONE, coeff()), (RatFunc.coerce(0), ONE)))]
    kind = r.choice([ElemX, ElemY])
    prod = 1
    for _ in range(n):
        m = r.randint(2, 3)
        if prod * m > degree_cap:
            break
        prod *= m
        out.append(kind(coeff(), m))
        kind = ElemY if kind is ElemX else ElemX
    return out


def rand_lower(r, below, slots=SLOTS):
    """Random element of degree < below (possibly zero)."""
    if below <= 0 or r.random() < 0.3:
        return NCElement()
    return rand_element(r, below - 1, 2, slots)


def rand_independent_pair(r, max_deg=3):
    """(f, g) whose leading forms are single words that are not powers of a common word."""
    while True:
        wf, wg = rand_word(r, max_deg), rand_word(r, max_deg)
        sf, sg = wf.skeletons()[0], wg.skeletons()[0]
        if sf and sg and sf + sg != sg + sf:
            return wf + rand_lower(r, len(sf)), wg + rand_lower(r, len(sg))


def rand_weighted_p(r, df, dg, max_weight=6):
    """Random P with letters and weight w_{df,dg}(P) <= max_weight."""
    total = NCElement()
    while total.is_zero() or total.skeletons() == [""]:
        total = NCElement()
        for _ in range(r.randint(1, 3)):
            skel, w = "", 0
            while True:
                letter = r.choice("xy")
                step = df if letter == "x" else dg
                if w + step > max_weight or (skel and r.random() < 0.4):
                    break
                skel += letter
                w += step
            if skel:
                total = total + NCElement.word(skel, [r.choice(SLOTS) for _ in range(len(skel) + 1)])
    return total
