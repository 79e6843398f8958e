from zlift.commutative import CommEndo, CommPoly, comm_compose
from zlift.certify import nagata
from zlift.freealg import NCElement, X, Y, eval_matrices, oracle_dimension
from zlift.morphism import (
    Endo, LinearLeft, Scale, TailForm, abelianize_endo, apply, compose, compose_all, conjugate,
    invert_elementary, is_z_polynomial, to_endo, transvect_x, transvect_y,
)
from zlift.peel import replay
from zlift.scalar import ONE, Z

from helpers import monomial_slot, rand_alternating, rand_element, rng

S = NCElement.scalar
SQ = transvect_y(TailForm.power(2))  # (x, y + x^2)


def test_apply_examples():
    r = rng(1)
    a = rand_element(r)
    assert apply(Endo.identity(), a) == a
    assert apply(to_endo(SQ), Y) == Y + X * X
    assert apply(to_endo(SQ), X * Y) == X * (Y + X * X)


def test_compose_examples():
    e = to_endo(SQ)
    assert compose(e, Endo.identity()) == e
    outer = Endo(X + Y * Y, Y)
    got = compose(outer, e)
    assert got == Endo(X + Y * Y, Y + (X + Y * Y) * (X + Y * Y))
    # the same images, checked at random matrices
    for a, b in zip(got.images(), (X + Y * Y, Y + (X + Y * Y) ** 2)):
        dim = oracle_dimension(a)
        assert eval_matrices(a, dim, 3) == eval_matrices(b, dim, 3)
    assert compose(e, to_endo(invert_elementary(SQ))).is_identity()


def test_to_endo_examples():
    assert to_endo(SQ) == Endo(X, Y + X * X)
    assert to_endo(Scale(Z, 1, 1, 1)) == Endo(S(Z) * X, Y)
    assert to_endo(LinearLeft([[0, 1], [1, 0]])) == Endo(Y, X)


def test_invert_examples():
    assert to_endo(invert_elementary(SQ)) == Endo(X, Y - X * X)
    assert invert_elementary(Scale(Z, 1, 1, 1)) == Scale(1 / Z, 1, 1, 1)
    assert invert_elementary(LinearLeft([[1, Z], [0, 1]])) == LinearLeft([[1, -Z], [0, 1]])


def test_every_step_inverts():
    r = rng(2)
    for _ in range(20):
        for s in rand_alternating(r, max_steps=3, max_tail=2) + [LinearLeft([[Z, 1], [1, 0]])]:
            assert compose(to_endo(s), to_endo(invert_elementary(s))).is_identity()
            assert compose(to_endo(invert_elementary(s)), to_endo(s)).is_identity()


def test_conjugate_examples():
    e = to_endo(SQ)
    assert conjugate(e, []) == e
    assert conjugate(Endo.identity(), [SQ, Scale(Z, 2, 1, Z)]).is_identity()
    phi = Endo(X, Y + S(Z) * X)
    by = [Scale(Z, 1, 1, 1), transvect_x(TailForm.power(2))]
    assert abelianize_endo(conjugate(phi, by)) == nagata()


def test_conjugate_keeps_automorphisms():
    r = rng(3)
    for _ in range(10):
        phi_step = Scale(*(monomial_slot(r) for _ in range(4)))
        phi, phi_inv = to_endo(phi_step), to_endo(invert_elementary(phi_step))
        by = rand_alternating(r, max_steps=2, max_tail=2, lo=-1, hi=1)
        b = compose_all(to_endo(s) for s in by)
        conj = conjugate(phi, by)
        assert compose(conj, conjugate(phi_inv, by)).is_identity()
        assert compose(conj, b) == compose(b, phi)


def test_is_z_polynomial_examples():
    assert is_z_polynomial(Endo(X, Y + S(Z) * X))
    assert not is_z_polynomial(Endo(X, Y + S(1 / Z) * X * X))
    lift = conjugate(Endo(X, Y + S(Z) * X), [Scale(Z, 1, 1, 1), transvect_x(TailForm.power(2))])
    assert is_z_polynomial(lift) == all(
        s.is_polynomial() for a in lift.images() for t in a.terms() for s in t.slots)


def test_abelianize_endo_examples():
    assert abelianize_endo(Endo.identity()) == CommEndo.identity()
    assert abelianize_endo(Endo(X, Y + X * X - S(ONE) * X * X)) == CommEndo.identity()
    assert abelianize_endo(Endo(X, Y + X * Y - Y * X)) == CommEndo.identity()


def test_functoriality_and_associativity():
    r = rng(4)
    for _ in range(10):
        a, b, c = (compose_all(to_endo(s) for s in rand_alternating(r, max_steps=2, max_tail=2))
                   for _ in range(3))
        assert abelianize_endo(compose(a, b)) == comm_compose(abelianize_endo(a), abelianize_endo(b))
        assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_replay_of_nagata_conjugation():
    phi = transvect_y(TailForm([(Z, 1)]))
    by = [Scale(Z, 1, 1, 1), transvect_x(TailForm.power(2))]
    steps = by + [phi] + [invert_elementary(s) for s in reversed(by)]
    stages = replay(steps)
    assert len(stages) == 6
    assert abelianize_endo(stages[-1]) == nagata()
    assert stages[-1] == conjugate(to_endo(phi), by)
    assert replay([]) == [Endo.identity()]
    assert replay([SQ]) == [Endo.identity(), to_endo(SQ)]


def test_comm_lift_agrees_with_commutative_step():
    cx = CommPoly.var("x")
    assert abelianize_endo(to_endo(SQ)) == CommEndo(cx, CommPoly.var("y") + cx * cx)
