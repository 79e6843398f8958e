"""Lifting-obstruction certificates for automorphisms of Q[z][x, y] fixing z.

The pipeline validates the input, decomposes it over Q(z), tries a Q[z]
decomposition, scans the canonical sequence for a pole pattern, and replays
a verbatim noncommutative lift of the steps to show how the boundary
z-degrees and sandwiches evolve.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from . import __version__
from .commutative import (
    Affine, CommEndo, CommPoly, ElemX, ElemY, NotAnAutomorphism, X, Y, comm_compose,
    detect_pattern, invert_steps, jacobian_det, jvdk_decompose, recompose, z_tame_attempt,
)
from .freealg import has_sandwich, left_z_degree, nc_degree, right_z_degree
from .morphism import (
    Endo, TailForm, TransvectY, compose, conjugate, is_z_polynomial, lift_comm_step, to_endo,
)
from .scalar import ONE, Z, ZERO, Poly, RatFunc, poly_lcm

EXIT_CODES = {"ZTame": 0, "NotZLiftable_Thm1_2": 10, "NotZLiftable_Thm1_1": 10, "NotAutomorphism": 20}

WILD_CAVEAT = (
    "wild over Q[z]: no Q[z] elementary reduction exists at the recorded stage; "
    "non-liftability rests on the general result for wild maps, the pole pattern was not found"
)


class NotPolynomialInput(ValueError):
    pass


class NotACoordinate(ValueError):
    pass


class SplitHypothesisFailed(ValueError):
    def __init__(self, message, conjugate=None):
        super().__init__(message)
        self.conjugate = conjugate


class Verdict(Enum):
    ZTame = "ZTame"
    NotZLiftable_Thm1_2 = "NotZLiftable_Thm1_2"
    NotZLiftable_Thm1_1 = "NotZLiftable_Thm1_1"
    NotAutomorphism = "NotAutomorphism"


@dataclass(frozen=True)
class StageRecord:
    degree: int
    has_sandwich: bool
    right_z_degree: object
    left_z_degree: object


@dataclass
class Certificate:
    verdict: Verdict
    comm_steps: list = field(default_factory=list)
    offender: object = None
    tame_witness: list = None
    invariant_trace: list = field(default_factory=list)
    failure: dict = None
    caveat: str = None
    reason: str = None
    seeds: dict = field(default_factory=dict)
    tool_version: str = __version__

    @property
    def exit_code(self):
        return EXIT_CODES[self.verdict.value]


# replay -----------------------------------------------------------------


def stage_record(e):
    images = (e.image_x, e.image_y)
    return StageRecord(
        degree=max(nc_degree(a) for a in images),
        has_sandwich=any(has_sandwich(a) for a in images),
        right_z_degree=min(right_z_degree(a) for a in images),
        left_z_degree=min(left_z_degree(a) for a in images),
    )


def lifted_stages(comm_steps):
    """Prefix composites of the verbatim noncommutative lift of each step."""
    stage = Endo.identity()
    out = []
    for s in comm_steps:
        stage = compose(stage, lift_comm_step(s))
        out.append(stage)
    return out


def invariant_trace(comm_steps):
    return [stage_record(s) for s in lifted_stages(comm_steps)]


# certify ----------------------------------------------------------------


def _is_unit_constant(p):
    if not p.is_constant():
        return False
    c = p.coeff(0, 0)
    return c.is_const() and bool(c)


def _validate(e):
    """Canonical sequence over Q(z), or a reason why e is no automorphism."""
    if not _is_unit_constant(jacobian_det(e)):
        return None, "Jacobian determinant is not a nonzero rational constant"
    try:
        steps = jvdk_decompose(e)
    except NotAnAutomorphism as exc:
        return None, f"no elementary decomposition over Q(z): {exc}"
    if recompose(steps) != e:
        return None, "decomposition does not recompose to the input"
    if not recompose(invert_steps(steps)).has_polynomial_coefficients():
        return None, "the inverse has non-polynomial coefficients"
    return steps, None


def certify(e):
    if not e.has_polynomial_coefficients():
        raise NotPolynomialInput("images must have coefficients in Q[z]")
    steps, reason = _validate(e)
    if steps is None:
        return Certificate(Verdict.NotAutomorphism, reason=reason)
    witness, failure = z_tame_attempt(e)
    if witness is not None:
        return Certificate(Verdict.ZTame, comm_steps=steps, tame_witness=witness,
                           invariant_trace=invariant_trace(witness))
    trace = invariant_trace(steps)
    offender = detect_pattern(steps)
    if offender is not None:
        return Certificate(Verdict.NotZLiftable_Thm1_2, comm_steps=steps, offender=offender,
                           invariant_trace=trace, failure=failure)
    return Certificate(Verdict.NotZLiftable_Thm1_1, comm_steps=steps, invariant_trace=trace,
                       failure=failure, caveat=WILD_CAVEAT)


# coordinates --------------------------------------------------------------


def _partial_degrees(p):
    return max(i for i, _ in p.terms), max(j for _, j in p.terms)


def _weighted_leading(p, wx, wy):
    top = max(wx * i + wy * j for i, j in p.terms)
    return top, CommPoly({k: v for k, v in p.terms.items() if wx * k[0] + wy * k[1] == top})


def _binomial_power(lead, a, k, along):
    """(c, mu) with lead = c * (v + mu * w^k)^a, where v is ``along``."""
    if along == "x":
        v, w, key_top, key_next = X, Y, (a, 0), (a - 1, k)
    else:
        v, w, key_top, key_next = Y, X, (0, a), (k, a - 1)
    c = lead.coeff(*key_top)
    if not c:
        return None
    mu = lead.coeff(*key_next) / (c * a)
    if not mu or lead != (v + w ** k * mu) ** a * c:
        return None
    return c, mu


def _reduce_coordinate(f):
    """Elementary steps s_i with f(s_1 ... s_r) linear in one variable."""
    reductions = []
    while True:
        if f.degree < 1:
            raise NotACoordinate("constant polynomial")
        a, b = _partial_degrees(f)
        if a == 0 or b == 0:
            if max(a, b) != 1:
                raise NotACoordinate("depends on one variable with degree > 1")
            return f, reductions
        if b % a == 0:
            k = b // a
            _, lead = _weighted_leading(f, k, 1)
            cm = _binomial_power(lead, a, k, "x")
            if cm is None:
                raise NotACoordinate(f"weighted leading form is not a binomial power ({a}, {b})")
            step = ElemX(-cm[1], k) if k > 1 else Affine(((ONE, -cm[1]), (ZERO, ONE)))
        elif a % b == 0:
            k = a // b
            _, lead = _weighted_leading(f, 1, k)
            cm = _binomial_power(lead, b, k, "y")
            if cm is None:
                raise NotACoordinate(f"weighted leading form is not a binomial power ({a}, {b})")
            step = ElemY(-cm[1], k) if k > 1 else Affine(((ONE, ZERO), (-cm[1], ONE)))
        else:
            raise NotACoordinate(f"partial degrees {a}, {b}: neither divides the other")
        reduced = step.endo().apply(f)
        if sum(_partial_degrees(reduced)) >= a + b:
            raise NotACoordinate("elementary reduction did not lower the degree")
        reductions.append(step)
        f = reduced


def complete_over_field(f):
    """A partner g over Q(z) with (f, g) an automorphism."""
    f = CommPoly.coerce(f)
    base, reductions = _reduce_coordinate(f)
    a, _ = _partial_degrees(base)
    pair = CommEndo(base, Y if a == 1 else X)
    for s in reversed(reductions):
        pair = comm_compose(s.inverse().endo(), pair)
    if pair.image_x != f:
        raise NotACoordinate("completion does not reproduce f")
    return pair.image_y


def _denominator(p):
    d = Poly.monomial(0)
    for c in p.terms.values():
        d = poly_lcm(d, c.den)
    return d


def _polynomial_partner(f, g0, max_power=4, extra_degree=3):
    """h = g0 + sum p_d f^d with Q[z] coefficients, or None.

    Each p_d is sought as q_d / Den^e with deg q_d < deg Den^e, where Den is
    the common denominator of g0; the conditions are linear over Q.  The
    search widens the degree of p and the power e together.
    """
    den = _denominator(g0)
    if den.degree == 0:
        return g0
    base = g0.degree // max(f.degree, 1)
    powers = [f ** d for d in range(base + extra_degree + 1)]
    for e in range(1, max_power + 1):
        for top in range(base, base + extra_degree + 1):
            h = _partner_ansatz(g0, powers[:top + 1], den ** e)
            if h is not None:
                return h
    return None


def _partner_ansatz(g0, powers, de):
    n = de.degree
    keys = sorted(set(g0.terms).union(*(p.terms for p in powers)))
    # unknown (d, t): coefficient of z^t in q_d
    unknowns = [(d, t) for d in range(len(powers)) for t in range(n)]
    rows, rhs = [], []
    for key in keys:
        target = (g0.coeff(*key) * RatFunc(de)).as_poly().divmod(de)[1]
        cols = []
        for d, t in unknowns:
            a = powers[d].coeff(*key)
            cols.append((Poly.monomial(t) * a.as_poly()).divmod(de)[1] if a else Poly())
        for s in range(n):
            rows.append([c.c[s] if s < len(c.c) else Fraction(0) for c in cols])
            rhs.append(-(target.c[s] if s < len(target.c) else Fraction(0)))
    sol = _solve_rational(rows, rhs, len(unknowns))
    if sol is None:
        return None
    h = g0
    for d, p in enumerate(powers):
        q = Poly([sol[d * n + t] for t in range(n)])
        if q.degree >= 0:
            h = h + p * RatFunc(q, de)
    if h.has_polynomial_coefficients():
        return h
    return None


def _solve_rational(rows, rhs, ncols):
    """One solution of rows * u = rhs over Q, or None if inconsistent."""
    if not rows:
        return [Fraction(0)] * ncols
    aug = DomainMatrix([[QQ(v.numerator, v.denominator) for v in row] + [QQ(b.numerator, b.denominator)]
                        for row, b in zip(rows, rhs)], (len(rows), ncols + 1), QQ)
    red, pivots = aug.rref()
    if ncols in pivots:
        return None
    sol = [Fraction(0)] * ncols
    dense = red.to_Matrix()
    for r, col in enumerate(pivots):
        sol[col] = Fraction(int(dense[r, ncols].p), int(dense[r, ncols].q))
    return sol


def certify_coordinate(f):
    f = CommPoly.coerce(f)
    if not f.has_polynomial_coefficients():
        raise NotPolynomialInput("coefficients must lie in Q[z]")
    g0 = complete_over_field(f)
    jac = jacobian_det(CommEndo(f, g0))
    if not jac.is_constant() or not jac.coeff(0, 0):
        raise NotACoordinate("completion has a non-constant Jacobian")
    g0 = g0 * jac.coeff(0, 0).inverse()
    h = _polynomial_partner(f, g0)
    if h is None:
        return Certificate(Verdict.NotAutomorphism,
                           reason="no partner with Q[z] coefficients was found for the coordinate")
    return certify(CommEndo(f, h))


# demo ----------------------------------------------------------------------


def nagata():
    q = Y * Y + X * Z
    z = CommPoly.const(Z)
    return CommEndo(X - Y * q * 2 - q * q * z, Y + q * z)


@dataclass
class NagataReport:
    automorphism: CommEndo
    jacobian: CommPoly
    fixes_invariant: bool
    canonical_sequence: list
    recomposes: bool
    offender: object
    certificate: Certificate
    coordinate_certificates: list
    lift_trace: list


def nagata_demo():
    e = nagata()
    q = Y * Y + X * Z
    steps = jvdk_decompose(e)
    cert = certify(e)
    return NagataReport(
        automorphism=e,
        jacobian=jacobian_det(e),
        fixes_invariant=e.apply(q) == q,
        canonical_sequence=steps,
        recomposes=recompose(steps) == e,
        offender=detect_pattern(steps),
        certificate=cert,
        coordinate_certificates=[certify_coordinate(e.image_x), certify_coordinate(e.image_y)],
        lift_trace=invariant_trace(steps),
    )


# adjoint split ---------------------------------------------------------------


@dataclass
class AdjointSplit:
    linear: TransvectY
    conjugate: Endo
    z_polynomial: bool


def adjoint_split(phi, psi_tail):
    """Split y -> y + Q(x) into its linear part and phi o (rest) o phi^-1."""
    tail = psi_tail if isinstance(psi_tail, TailForm) else TailForm(psi_tail)
    if any(not q.is_polynomial() for qs in tail.summands for q in qs):
        raise ValueError("the tail must have polynomial coefficients")
    lin, rest = tail.split_linear()
    psi1 = TransvectY(ONE, ONE, lin)
    if not rest.summands:
        conj = Endo.identity()
    else:
        conj = conjugate(to_endo(TransvectY(ONE, ONE, rest)), [phi])
    rz = min(right_z_degree(a) for a in conj.images() if not a.is_zero())
    if rz < 0:
        raise SplitHypothesisFailed("the conjugate has negative right z-degree", conj)
    return AdjointSplit(psi1, conj, is_z_polynomial(conj))
