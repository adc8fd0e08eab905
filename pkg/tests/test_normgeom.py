import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tng.covers import EnumerationCursor, iterate_candidates, trivial_rep
from tng.errors import DimensionExceeded, IncompleteCones, ZeroPolynomial
from tng.exact.laurent import LaurentPoly
from tng.hull import primitive
from tng.normgeom import (
    A_IN_B,
    B_IN_A,
    EQUAL,
    INCOMPARABLE,
    alexander_norm,
    ball_compare,
    certify_equality,
    degenerate_hyperplanes,
    difference_body,
    dual_ball,
    evaluate_character,
    face_polynomials,
    interval_ball,
    newton_polytope,
    polar,
    select_character,
)
from tng.torsion import TorsionValue, deg_tau, specialize, tau_multivariable, tau_univariate, twist_by_character

from conftest import mpoly, upoly

SQUARE = mpoly({(1, 1): 1, (1, 0): -1, (0, 1): -1, (0, 0): 1})
CROSS = mpoly({(1, 0): 1, (0, 1): 1, (-1, 0): 1, (0, -1): 1})          # ball max(|a|, |b|) <= 1 at k = 2


def F(*xs):
    return tuple(Fraction(x) for x in xs)


# --- Newton polytopes and the norm -------------------------------------------------------


def test_newton_examples():
    tri = newton_polytope(mpoly({(0, 0): 1, (1, 0): 1, (0, 1): 1}))
    assert sorted(tri.vertices) == [(0, 0), (0, 1), (1, 0)]
    pt = newton_polytope(LaurentPoly.constant(5, 2))
    assert pt.vertices == [(0, 0)]
    assert sorted(newton_polytope(SQUARE).vertices) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    with pytest.raises(ZeroPolynomial):
        newton_polytope(LaurentPoly.zero(2))
    with pytest.raises(DimensionExceeded):
        newton_polytope(LaurentPoly.one(4))


def test_norm_examples():
    assert alexander_norm(SQUARE, (1, 0)) == 1
    assert alexander_norm(SQUARE, (1, 1)) == 2
    assert alexander_norm(LaurentPoly.zero(2), (3, 1)) == 0
    assert alexander_norm(None, (3, 1)) == 0
    assert alexander_norm(LaurentPoly.constant(2, 2), (3, 1)) == 0
    t = TorsionValue.make(upoly([1, -1, 1]), upoly([-1, 1]))
    assert alexander_norm(t, (1,)) == 1
    assert alexander_norm(t, (-3,)) == 3


@given(st.integers(-5, 5), st.integers(-6, 6), st.integers(-6, 6))
def test_norm_homogeneous(n, a, b):
    assert alexander_norm(SQUARE, (n * a, n * b)) == abs(n) * alexander_norm(SQUARE, (a, b))
    assert alexander_norm(CROSS, (n * a, n * b)) == abs(n) * alexander_norm(CROSS, (a, b))


def test_specialization_degree_and_hyperplanes():
    rng = random.Random(3)
    polys = [SQUARE, CROSS, mpoly({(0, 0): 1, (2, 1): -3, (1, 3): 2, (1, 1): 1})]
    for p in polys:
        hyper = degenerate_hyperplanes(p)
        tv = TorsionValue.make(p, LaurentPoly.one(2))
        for _ in range(60):
            phi = (rng.randint(-5, 5), rng.randint(-5, 5))
            if not any(phi):
                continue
            d = deg_tau(specialize(tv, phi))
            assert d <= alexander_norm(p, phi)
            if all(phi[0] * h[0] + phi[1] * h[1] != 0 for h in hyper):
                assert d == alexander_norm(p, phi)


def test_specialization_can_drop_degree_on_a_hyperplane():
    # x - y vanishes identically at phi = (1, 1), where the width is 0 anyway;
    # x^2 - 2xy + y^2 + x keeps only part of its width at phi = (1, 1)
    p = mpoly({(2, 0): 1, (1, 1): -2, (0, 2): 1, (1, 0): 1})
    assert alexander_norm(p, (1, 1)) == 1
    assert deg_tau(specialize(TorsionValue.make(p, LaurentPoly.one(2)), (1, 1))) == 0


# --- balls -------------------------------------------------------------------------------


def test_dual_ball_examples():
    ball = dual_ball(SQUARE, 1)
    assert sorted(ball.vertices) == sorted([F(1, 0), F(-1, 0), F(0, 1), F(0, -1)])
    assert ball.degenerate == []
    whole = dual_ball(LaurentPoly.constant(3, 2), 1)
    assert whole.is_whole_space() and len(whole.degenerate) == 2 and whole.vertices == []
    for d in (1, 2, 5):
        iv = dual_ball(upoly([1] * (d + 1)), 1)
        assert sorted(iv.vertices) == [F(Fraction(-1, d)), F(Fraction(1, d))]
    with pytest.raises(DimensionExceeded):
        dual_ball(LaurentPoly.one(4), 1)


def test_degenerate_directions():
    # x - 1 has zero width along (0, 1)
    ball = dual_ball(mpoly({(1, 0): 1, (0, 0): -1}), 1)
    assert ball.degenerate == [(0, 1)]
    assert sorted(ball.vertices) == [F(-1, 0), F(1, 0)]
    assert ball.norm((0, 7)) == 0 and ball.norm((2, 7)) == 2


def test_ball_norm_matches_width():
    rng = random.Random(5)
    for p, k in [(SQUARE, 1), (CROSS, 2), (mpoly({(0, 0): 1, (2, 1): 1, (1, 3): 1}), 3)]:
        ball = dual_ball(p, k)
        for _ in range(40):
            phi = (rng.randint(-6, 6), rng.randint(-6, 6))
            assert ball.norm(phi) == Fraction(alexander_norm(p, phi), k)


def test_ball_compare_examples():
    sq = dual_ball(SQUARE, 1)
    assert ball_compare(sq, dual_ball(SQUARE, 1)) == EQUAL
    assert ball_compare(interval_ball(1, 1), interval_ball(2, 1)) == B_IN_A
    box = dual_ball(CROSS, 2)
    assert sorted(box.vertices) == sorted([F(1, 1), F(1, -1), F(-1, 1), F(-1, -1)])
    assert ball_compare(sq, box) == A_IN_B
    assert ball_compare(box, sq) == B_IN_A
    thin = dual_ball(mpoly({(2, 0): 1, (0, 0): 1, (0, 1): 1}), 1)
    assert ball_compare(thin, sq) == INCOMPARABLE


def test_ball_of_equivalent_inputs_is_equal():
    rng = random.Random(7)
    for _ in range(20):
        p = LaurentPoly(2, {(rng.randint(-2, 2), rng.randint(-2, 2)): rng.randint(-3, 3) for _ in range(4)})
        if not p:
            continue
        q = p.shift((rng.randint(-3, 3), rng.randint(-3, 3))).scale(Fraction(-2, 3))
        assert ball_compare(dual_ball(p, 2), dual_ball(q, 2)) == EQUAL


def test_polar_involution():
    for p in (SQUARE, CROSS, mpoly({(0, 0, 0): 1, (1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1}, nvars=3)):
        D = difference_body(newton_polytope(p))
        back = polar(polar(D))
        assert back.same_as(D)


def test_three_dimensional_ball():
    p = mpoly({(0, 0, 0): 1, (1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1}, nvars=3)
    ball = dual_ball(p, 1)
    assert ball.degenerate == []
    rng = random.Random(1)
    for _ in range(30):
        phi = tuple(rng.randint(-4, 4) for _ in range(3))
        assert ball.norm(phi) == alexander_norm(p, phi)
    for i, w in enumerate(ball.witness_classes()):
        assert ball.cone_of(w) == i


def test_witnesses_lie_in_their_cones():
    for p, k in [(SQUARE, 1), (CROSS, 2), (mpoly({(0, 0): 1, (2, 1): 1, (1, 3): 1}), 1)]:
        ball = dual_ball(p, k)
        ws = ball.witness_classes()
        assert len(ws) == len(ball.cones)
        for i, w in enumerate(ws):
            assert ball.cone_of(w) == i
            assert primitive(w) == w


# --- faces and character selection ------------------------------------------------------------


def test_face_polynomial_examples():
    two = face_polynomials(mpoly({(1, 0): 1, (0, 1): 1}))
    assert len(two) == 3
    assert sorted(len(q.terms) for _, q in two) == [1, 1, 2]
    const = face_polynomials(LaurentPoly.constant(4, 2))
    assert len(const) == 1 and const[0][1] == LaurentPoly.constant(4, 2)
    sq = face_polynomials(SQUARE)
    assert len(sq) == 9
    assert sorted(d["dim"] for d, _ in sq) == [0, 0, 0, 0, 1, 1, 1, 1, 2]
    assert sq[-1][1] == SQUARE


def test_face_polynomials_keep_interior_lattice_points():
    p = mpoly({(0, 0): 1, (1, 0): 5, (2, 0): 1, (0, 2): 1, (1, 1): 7})
    faces = face_polynomials(p)
    bottom = [q for d, q in faces if d["dim"] == 1 and sorted(d["vertices"]) == [(0, 0), (2, 0)]]
    assert bottom and len(bottom[0].terms) == 3


def test_select_character_examples():
    assert select_character([upoly([1, 1])]) == ((1,), 1, 0)
    assert select_character([mpoly({(1, 0): 1, (0, 1): -1})]) == ((1, 0), 2, 1)
    polys = [q for _, q in face_polynomials(SQUARE)]
    kappa, m, j = select_character(polys)
    assert all(evaluate_character(q, kappa, m, j) for q in polys)
    with pytest.raises(ZeroPolynomial):
        select_character([LaurentPoly.zero(1)])


def test_select_character_on_whitehead(whitehead):
    t = tau_multivariable(whitehead, trivial_rep(whitehead))
    polys = [q for _, q in face_polynomials(t.numerator)]
    assert len(polys) == 9
    kappa, m, j = select_character(polys)
    assert all(evaluate_character(q, kappa, m, j) for q in polys)


def _twisted_degree_equals_norm(t, rng, samples=100):
    polys = [q for _, q in face_polynomials(t.numerator)]
    kappa, m, j = select_character(polys)
    twisted = twist_by_character(t, m, [j * x for x in kappa])
    for _ in range(samples):
        phi = tuple(rng.randint(-7, 7) for _ in range(t.nvars))
        if not any(phi):
            continue
        assert deg_tau(specialize(twisted, phi)) == alexander_norm(t, phi)


def test_twisted_specialization_recovers_norm(whitehead):
    rng = random.Random(10)
    _twisted_degree_equals_norm(tau_multivariable(whitehead, trivial_rep(whitehead)), rng)
    # a polynomial whose plain specializations drop degree on many classes
    p = mpoly({(2, 0): 1, (1, 1): -2, (0, 2): 1, (1, 0): 1, (0, 0): -1})
    _twisted_degree_equals_norm(TorsionValue.make(p, LaurentPoly.one(2)), rng)


# --- certification ------------------------------------------------------------------------------


def test_certify_interval():
    ball = interval_ball(1, 1)
    cert = certify_equality(ball, [((1,), 1, 1, "genus"), ((-1,), 1, 1, "genus")])
    assert len(cert.witnesses) == 2
    with pytest.raises(IncompleteCones):
        certify_equality(ball, [((1,), 1, 1)])


def test_certify_square_missing_cone():
    ball = dual_ball(SQUARE, 1)
    ws = [(w, ball.norm(w), int(ball.norm(w))) for w in ball.witness_classes()]
    assert certify_equality(ball, ws).witnesses
    with pytest.raises(IncompleteCones) as info:
        certify_equality(ball, ws[:3])
    assert len(info.value.uncovered) == 1


def test_mismatched_witness_is_rejected_not_fatal():
    ball = interval_ball(1, 1)
    cert = certify_equality(ball, [((1,), 1, 1), ((-1,), 1, 1), ((2,), 2, 3)])
    assert len(cert.rejected) == 1
    with pytest.raises(IncompleteCones):
        certify_equality(ball, [((1,), 1, 2), ((-1,), 1, 1)])


def test_trefoil_certificate(trefoil):
    t = tau_univariate(trefoil, trivial_rep(trefoil), [1])
    ball = dual_ball(t, 1)
    assert sorted(ball.vertices) == [F(-1), F(1)]
    cert = certify_equality(ball, [((1,), ball.norm((1,)), 1, "Seifert genus 1 surface"),
                                   ((-1,), ball.norm((-1,)), 1, "Seifert genus 1 surface")])
    assert sorted(w[0] for w in cert.witnesses) == [(-1,), (1,)]


def test_cone_witnesses_are_not_enough_for_a_bigger_norm():
    # x = max(|a| + |b|, 2|b|) agrees with z = |a| + |b| at the four cone
    # barycenters (+-1, +-1) but not at (0, 1); only ray mode notices
    ball = dual_ball(SQUARE, 1)

    def x(phi):
        a, b = phi
        return max(abs(a) + abs(b), 2 * abs(b))

    def witnesses(classes):
        return [(w, ball.norm(w), x(w)) for w in classes]

    cones = certify_equality(ball, witnesses(ball.witness_classes()), mode="cones")
    assert len(cones.witnesses) == 4
    with pytest.raises(IncompleteCones):
        certify_equality(ball, witnesses(ball.ray_classes()), mode="rays")


def test_whole_space_needs_every_ray():
    zero = dual_ball(LaurentPoly.one(2), 1)
    rays = zero.ray_classes()
    assert sorted(rays) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    ws = [(r, 0, 0) for r in rays]
    assert certify_equality(zero, ws, mode="cones").witnesses
    with pytest.raises(IncompleteCones):
        certify_equality(zero, ws[:1], mode="cones")


def test_candidates_give_shrinking_balls(whitehead):
    # each candidate norm is at most the true norm |a| + |b|, so its ball
    # contains the unit ball of the trivial representation
    cur = EnumerationCursor(max_degree=3, max_order=3)
    thurston = dual_ball(SQUARE, 1)
    for cand, _ in list(iterate_candidates(whitehead, cur))[:20]:
        t = tau_multivariable(whitehead, cand.rep)
        if t.is_zero():
            continue
        ball = dual_ball(t, cand.rep.dim)
        assert ball_compare(thurston, ball) in (EQUAL, A_IN_B)
