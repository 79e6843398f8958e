"""Degree estimate for P(f, g) in terms of the commutator of f and g.

For f, g whose leading forms are not proportional to powers of each other,

    deg P(f, g) >= deg[f, g] / deg(fg) * w(P)

where w weighs x by deg f and y by deg g.  The bound is kept as an exact
Fraction; the hypotheses are only certified in the decidable cases.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .freealg import NCElement, highest_form, nc_degree, substitute, weight_degree
from .peel import solve_multilinear_match


class ZeroCommutator(ValueError):
    pass


class Hypotheses(Enum):
    MonomialIndependent = "MonomialIndependent"
    DependentNonProportional = "DependentNonProportional"
    Unverified = "Unverified"


@dataclass(frozen=True)
class EstimateReport:
    lhs_degree: int
    commutator_degree: int
    product_degree: int
    weight: int
    bound: Fraction
    holds: bool
    hypotheses: Hypotheses

    def as_dict(self):
        return {
            "lhs_degree": self.lhs_degree,
            "commutator_degree": self.commutator_degree,
            "product_degree": self.product_degree,
            "weight": self.weight,
            "bound": str(self.bound),
            "holds": self.holds,
            "hypotheses": self.hypotheses.value,
        }


def commutator(f, g):
    f, g = NCElement.coerce(f), NCElement.coerce(g)
    return f * g - g * f


def _single_skeleton(a):
    skels = a.skeletons()
    return skels[0] if len(skels) == 1 else None


def _proportional_to_power(u, v, bounds=None):
    """Whether u = sum p * v^m * q was found for the fitting m."""
    du, dv = nc_degree(u), nc_degree(v)
    if dv < 1 or du % dv:
        return False
    m = du // dv
    return solve_multilinear_match(u, v, m, bounds) is not None


def check_hypotheses(f, g, bounds=None, witness=None):
    """Classify the leading forms of f and g.

    ``witness`` is an optional nonzero P with P(f+, g+) = 0, i.e. evidence
    that the leading forms are algebraically dependent.
    """
    fp, gp = highest_form(f), highest_form(g)
    sf, sg = _single_skeleton(fp), _single_skeleton(gp)
    if sf is not None and sg is not None and sf and sg and sf + sg != sg + sf:
        return Hypotheses.MonomialIndependent
    if _proportional_to_power(gp, fp, bounds) or _proportional_to_power(fp, gp, bounds):
        return Hypotheses.Unverified
    if witness is not None:
        witness = NCElement.coerce(witness)
        if not witness.is_zero() and nc_degree(witness) >= 1 and substitute(witness, fp, gp).is_zero():
            return Hypotheses.DependentNonProportional
    return Hypotheses.Unverified


def check_estimate(f, g, p, bounds=None, witness=None):
    f, g, p = (NCElement.coerce(a) for a in (f, g, p))
    if f.is_zero() or g.is_zero() or p.is_zero():
        raise ValueError("f, g and P must be nonzero")
    if nc_degree(p) < 1:
        raise ValueError("P must contain a letter")
    c = commutator(f, g)
    if c.is_zero():
        raise ZeroCommutator("f and g commute; the estimate does not apply")
    df, dg = nc_degree(f), nc_degree(g)
    lhs = nc_degree(substitute(p, f, g))
    w = weight_degree(p, df, dg)
    bound = Fraction(nc_degree(c), df + dg) * w
    return EstimateReport(
        lhs_degree=lhs,
        commutator_degree=nc_degree(c),
        product_degree=df + dg,
        weight=w,
        bound=bound,
        holds=lhs >= bound,
        hypotheses=check_hypotheses(f, g, bounds, witness),
    )
