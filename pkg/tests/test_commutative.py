import pytest

from zlift.certify import nagata
from zlift.commutative import (
    Affine, CommEndo, CommPoly, ElemX, ElemY, NonUnitDeterminant, NotAnAutomorphism, comm_compose,
    detect_pattern, invert_steps, jacobian_det, jvdk_decompose, linear_z_tame_reduce, recompose,
    steps_matrix_product, z_tame_decompose,
)
from zlift.scalar import ONE, Z, RatFunc, is_polynomial

from helpers import rand_comm_steps, rand_ratfunc, rng

X, Y = CommPoly.var("x"), CommPoly.var("y")
ZERO = RatFunc()
IDENTITY = Affine(((ONE, ZERO), (ZERO, ONE)))


def nagata_inverse():
    q = Y * Y + X * Z
    return CommEndo(X + Y * q * 2 - q * q * Z, Y - q * Z)


def rand_comm_poly(r, deg=2, terms=3):
    p = CommPoly()
    for _ in range(r.randint(1, terms)):
        i = r.randint(0, deg)
        p = p + X ** i * Y ** r.randint(0, deg - i) * rand_ratfunc(r)
    return p


def test_compose_examples():
    n = nagata()
    assert comm_compose(n, CommEndo.identity()) == n
    assert comm_compose(CommEndo.identity(), n) == n
    assert comm_compose(n, nagata_inverse()) == CommEndo.identity()
    assert comm_compose(nagata_inverse(), n) == CommEndo.identity()
    assert comm_compose(CommEndo(X, Y + X * X), CommEndo(X, Y - X * X)) == CommEndo.identity()


def test_jacobian_examples():
    assert jacobian_det(CommEndo.identity()) == CommPoly.const(ONE)
    assert jacobian_det(CommEndo(X, Y + X * X)) == CommPoly.const(ONE)
    assert jacobian_det(nagata()) == CommPoly.const(ONE)
    assert jacobian_det(CommEndo(X + Y, Y + X)).is_zero()


def test_chain_rule():
    r = rng(21)
    for _ in range(15):
        a = CommEndo(rand_comm_poly(r), rand_comm_poly(r))
        b = CommEndo(rand_comm_poly(r), rand_comm_poly(r))
        # compose(a, b) substitutes a's images into b, so a plays the inner map
        assert jacobian_det(comm_compose(a, b)) == a.apply(jacobian_det(b)) * jacobian_det(a)


def test_decompose_examples():
    assert jvdk_decompose(CommEndo(X, Y + X * X * Z)) == [ElemY(Z, 2)]
    assert jvdk_decompose(CommEndo.identity()) == []
    with pytest.raises(NotAnAutomorphism):
        jvdk_decompose(CommEndo(X + Y, Y + X))
    with pytest.raises(NotAnAutomorphism):
        jvdk_decompose(CommEndo(X + Y * Y, Y + X * X))


def test_nagata_canonical_sequence():
    steps = jvdk_decompose(nagata())
    assert recompose(steps) == nagata()
    assert any(isinstance(s, (ElemX, ElemY)) and s.m == 2 and not is_polynomial(s.c) for s in steps)
    o = detect_pattern(steps)
    assert o is not None and o.exponent == 2 and o.valuation < 0 and o.pole == 0


def test_recomposition_identity():
    r = rng(22)
    for _ in range(25):
        steps = rand_comm_steps(r, n=r.randint(1, 5))
        e = recompose(steps)
        assert recompose(jvdk_decompose(e)) == e
        assert recompose(steps + invert_steps(steps)) == CommEndo.identity()


def test_accepted_maps_have_constant_jacobian():
    r = rng(23)
    for _ in range(10):
        e = recompose(rand_comm_steps(r, n=3))
        jvdk_decompose(e)
        j = jacobian_det(e)
        assert j.is_constant() and not j.is_zero()


def test_decomposition_alternates_and_decreases():
    r = rng(24)
    for _ in range(10):
        e = recompose(rand_comm_steps(r, n=4))
        steps = jvdk_decompose(e)
        for a, b in zip(steps, steps[1:]):
            if not isinstance(a, Affine) and not isinstance(b, Affine):
                assert type(a) is not type(b)
        # peeling from the end lowers the total degree at every elementary step
        degree = lambda m: m.image_x.degree + m.image_y.degree
        for i, s in enumerate(steps):
            if not isinstance(s, Affine):
                assert degree(recompose(steps[:i])) < degree(recompose(steps[:i + 1]))


def test_detect_pattern_examples():
    assert detect_pattern([ElemY(1 / Z, 2)]).index == 0
    assert detect_pattern([ElemY(Z**3, 5)]) is None
    assert detect_pattern([Affine(((ONE, ZERO), (1 / Z, ONE)))]) is None
    o = detect_pattern([IDENTITY, ElemX(Z, 3), ElemY(1 / (Z - 2), 2)])
    assert (o.index, o.pole, o.valuation) == (2, 2, -1)


def test_detect_pattern_stable_under_linear_conjugation():
    base = detect_pattern(jvdk_decompose(nagata()))
    r = rng(25)
    for _ in range(10):
        p = RatFunc.coerce(r.randint(-2, 2)) + Z * r.randint(-2, 2)
        lin = Affine(((ONE, p), (ZERO, ONE))) if r.random() < 0.5 else Affine(((ONE, ZERO), (p, ONE)))
        e = comm_compose(comm_compose(lin.endo(), nagata()), lin.inverse().endo())
        steps = jvdk_decompose(e)
        assert recompose(steps) == e
        o = detect_pattern(steps)
        assert o is not None
        assert (o.valuation, o.exponent, o.pole) == (base.valuation, base.exponent, base.pole)


def test_z_tame_examples():
    assert z_tame_decompose(CommEndo(X, Y + X * X * Z)) == [ElemY(Z, 2)]
    assert z_tame_decompose(nagata()) is None
    swap = z_tame_decompose(CommEndo(Y, X))
    assert recompose(swap) == CommEndo(Y, X)
    assert all(isinstance(s, Affine) for s in swap)
    shifted = CommEndo(X + 1, Y + X * X * Z - Z)
    steps = z_tame_decompose(shifted)
    assert recompose(steps) == shifted


def test_z_tame_certificates_are_polynomial_and_unobstructed():
    r = rng(26)
    poly_coeff = lambda: r.choice([Z, Z + 1, RatFunc.coerce(2), Z * Z - 1])
    for _ in range(20):
        e = recompose(rand_comm_steps(r, n=3, coeff=poly_coeff))
        steps = z_tame_decompose(e)
        assert steps is not None
        assert recompose(steps) == e
        assert all(c.is_polynomial() for s in steps for c in _coefficients(s))
        assert detect_pattern(jvdk_decompose(e)) is None


def _coefficients(s):
    if isinstance(s, Affine):
        return [v for row in s.matrix for v in row] + list(s.translation)
    return [s.c]


def test_linear_reduce_examples():
    one = linear_z_tame_reduce([[ONE, Z], [ZERO, ONE]])
    assert len(one) == 1
    for m in ([[ONE, Z], [ZERO, ONE]], [[ZERO, ONE], [ONE, ZERO]], [[1 + Z * Z, Z], [Z, ONE]]):
        steps = linear_z_tame_reduce(m)
        assert steps_matrix_product(steps) == [list(row) for row in m]
        assert all(c.is_polynomial() for s in steps for c in _coefficients(s))
    assert len(linear_z_tame_reduce([[1 + Z * Z, Z], [Z, ONE]])) <= 4
    with pytest.raises(NonUnitDeterminant):
        linear_z_tame_reduce([[Z, ZERO], [ZERO, ONE]])


def test_linear_reduce_random_products():
    r = rng(27)
    for _ in range(30):
        m = [[ONE, ZERO], [ZERO, ONE]]
        for _ in range(r.randint(1, 5)):
            p = RatFunc.coerce(r.randint(-3, 3)) + Z * r.randint(-2, 2) + Z * Z * r.randint(-1, 1)
            t = [[ONE, p], [ZERO, ONE]] if r.random() < 0.5 else [[ONE, ZERO], [p, ONE]]
            m = [[sum((m[i][k] * t[k][j] for k in range(2)), ZERO) for j in range(2)] for i in range(2)]
        steps = linear_z_tame_reduce(m)
        assert steps_matrix_product(steps) == m
        assert recompose(steps) == CommEndo(X * m[0][0] + Y * m[0][1], X * m[1][0] + Y * m[1][1])
