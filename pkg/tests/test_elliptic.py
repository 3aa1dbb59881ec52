import random
from fractions import Fraction

import pytest

from csk3.elliptic import (
    DEFAULT_SEARCH_BOUND,
    INFINITY,
    MINUS,
    PLUS,
    ExternalFact,
    OffCurveError,
    Point,
    SearchFound,
    TwistedCurve,
    WeierstrassCurve,
    add,
    certify_positive_rank,
    denormalize_twist,
    first_nontorsion_point,
    negate,
    normalize_twist,
    on_curve,
    quadratic_twist_class,
    rescale_twist_point,
    scalar_mul,
    search_points,
    torsion_test,
)
from csk3.numtheory import SquarefreeClass, rational_square_root

E25 = WeierstrassCurve(-25, 0)          # y^2 = x^3 - 25x, the twist by 5 normalized
T15 = TwistedCurve(15)                  # 15 y^2 = x^3 - x


def test_on_curve_examples():
    assert on_curve(T15, Point(Fraction(-3, 5), Fraction(4, 25)))
    assert on_curve(TwistedCurve(7), Point(0, 0))
    assert not on_curve(TwistedCurve(1), Point(1, 1))
    assert on_curve(E25, INFINITY)


def test_curve_validation():
    with pytest.raises(ValueError):
        WeierstrassCurve(0, 0)  # singular
    with pytest.raises(ValueError):
        TwistedCurve(12)  # not squarefree
    with pytest.raises(ValueError):
        TwistedCurve(5, "weird")


def test_add_identity_and_inverse():
    P = Point(-4, 6)
    assert add(E25, P, INFINITY) == P
    assert add(E25, INFINITY, P) == P
    assert add(E25, P, negate(P)) is INFINITY


def test_add_doubling_exact_value():
    P = Point(-4, 6)
    D = add(E25, P, P)
    assert D == Point(Fraction(1681, 144), Fraction(-62279, 1728))
    assert on_curve(E25, D)


def test_add_rejects_off_curve():
    with pytest.raises(OffCurveError):
        add(E25, Point(1, 1), INFINITY)


def test_scalar_mul():
    P = Point(-4, 6)
    assert scalar_mul(E25, 0, P) is INFINITY
    assert scalar_mul(E25, 1, P) == P
    assert scalar_mul(E25, 2, Point(0, 0)) is INFINITY
    assert scalar_mul(E25, 2, P) == add(E25, P, P)
    assert scalar_mul(E25, -3, P) == negate(scalar_mul(E25, 3, P))


def test_twisted_group_law_matches_normalized():
    # the chord-tangent law on 15 y^2 = x^3 - x agrees with the normalized model
    P = Point(Fraction(-3, 5), Fraction(4, 25))
    Q = add(T15, P, P)
    assert on_curve(T15, Q)
    assert normalize_twist(15, Q) == add(T15.normalized(), normalize_twist(15, P),
                                         normalize_twist(15, P))


def test_torsion_examples():
    assert torsion_test(E25, INFINITY).order == 1
    assert torsion_test(TwistedCurve(7), Point(0, 0)).order == 2
    assert torsion_test(E25, Point(5, 0)).order == 2
    status = torsion_test(E25, Point(-4, 6))
    assert not status.is_torsion


def test_nontorsion_heights_grow():
    # denominator bit-length of x(nP) strictly increases along n = 1, 2, 4, 8
    for D, P in ((5, Point(-4, 6)), (15, Point(-9, 36))):
        curve = TwistedCurve(D).normalized()
        lengths = []
        for n in (1, 2, 4, 8):
            Q = scalar_mul(curve, n, P)
            lengths.append(Q.x.denominator.bit_length())
        assert lengths == sorted(set(lengths))


def _brute_points(curve, bound):
    # independent oracle: direct double loop over x = m/n, exact y solve
    out = set()
    d, A, B = curve.model_coefficients()
    for n in range(1, bound + 1):
        for m in range(-bound, bound + 1):
            x = Fraction(m, n)
            if max(abs(x.numerator), x.denominator) > bound:
                continue
            y = rational_square_root((x ** 3 + A * x + B) / d)
            if y is None:
                continue
            out.add((x, y))
            out.add((x, -y))
    return out


def test_search_points_complete_against_brute_force():
    pts = search_points(E25, 10)
    assert {(P.x, P.y) for P in pts} == _brute_points(E25, 10)
    # canonical order: by (height, x, y)
    keys = [(max(abs(P.x.numerator), P.x.denominator), P.x, P.y) for P in pts]
    assert keys == sorted(keys)
    for wanted in [(-5, 0), (0, 0), (5, 0), (-4, 6), (-4, -6)]:
        assert Point(*wanted) in pts


def test_search_points_rank_zero_curve():
    pts = search_points(WeierstrassCurve(-1, 0), 5)
    assert {(P.x, P.y) for P in pts} == {(-1, 0), (0, 0), (1, 0)}


def test_search_points_contains_known_witness():
    pts = search_points(WeierstrassCurve(-1156, 0), 20)
    assert Point(-16, 120) in pts


def test_search_closure_under_group_law():
    pts = search_points(E25, 10)
    for P in pts[:4]:
        for Q in pts[:4]:
            assert on_curve(E25, add(E25, P, Q))


def test_normalize_twist_examples():
    assert normalize_twist(1, Point(0, 0)) == Point(0, 0)
    P = Point(Fraction(-3, 5), Fraction(4, 25))
    assert normalize_twist(15, P) == Point(-9, 36)
    assert denormalize_twist(15, Point(-9, 36)) == P


def test_normalize_twist_is_isomorphism():
    rng = random.Random(3)
    base = Point(Fraction(-3, 5), Fraction(4, 25))
    pool = [scalar_mul(T15, n, base) for n in range(1, 6)]
    pool = [P for P in pool if P is not INFINITY]
    for _ in range(50):
        P, Q = rng.choice(pool), rng.choice(pool)
        left = normalize_twist(15, add(T15, P, Q))
        right = add(T15.normalized(), normalize_twist(15, P), normalize_twist(15, Q))
        assert left == right


def test_full_two_torsion_on_twists():
    for D in (1, 5, 7, 15, 34):
        curve = TwistedCurve(D)
        for x in curve.two_torsion_x():
            assert on_curve(curve, Point(x, 0))
            assert torsion_test(curve, Point(x, 0)).order == 2


def test_rescale_twist_point():
    # 15 y^2 = x^3 - x carries to 60 y^2 = x^3 - x (60 = 15 * 2^2)
    P = Point(Fraction(-3, 5), Fraction(4, 25))
    Q = rescale_twist_point(15, 60, P)
    assert 60 * Q.y ** 2 == Q.x ** 3 - Q.x
    with pytest.raises(ValueError):
        rescale_twist_point(15, 30, P)


def test_quadratic_twist_class():
    assert quadratic_twist_class(WeierstrassCurve(-1296, 0)) == (MINUS, SquarefreeClass(1))
    assert quadratic_twist_class(WeierstrassCurve(-324, 0)) == (MINUS, SquarefreeClass(2))
    assert quadratic_twist_class(WeierstrassCurve(100, 0)) == (PLUS, SquarefreeClass(10))
    assert quadratic_twist_class(WeierstrassCurve(-2, 0)) is None  # quartic twist
    assert quadratic_twist_class(WeierstrassCurve(-1, 3)) is None


def test_certify_positive_rank_congruent_numbers():
    cert = certify_positive_rank(5)
    assert cert.witness == Point(-4, 6)
    assert isinstance(cert.provenance, SearchFound)
    assert cert.verify()

    cert15 = certify_positive_rank(15)
    assert cert15.witness == Point(-9, 36)
    assert cert15.verify()


def test_certify_inconclusive_for_rank_zero():
    assert certify_positive_rank(1) is None
    assert certify_positive_rank(17, search_budget=50) is None


def test_certify_rejects_non_squarefree():
    with pytest.raises(ValueError):
        certify_positive_rank(12)


def test_certify_via_quartic_descent():
    # no point on y^2 = x^3 - 37^2 x within naive reach, but the quartic
    # 37 s^2 = 1 + 4 t^4 has one at t = 21 and transports it over
    cert = certify_positive_rank(37, search_budget=200)
    assert cert is not None
    assert cert.provenance.method == "quartic-descent"
    assert cert.verify()
    assert on_curve(TwistedCurve(37).normalized(), cert.witness)


def test_certify_external_fact_fallback():
    assert certify_positive_rank(119) is None
    cert = certify_positive_rank(119, allow_external_facts=True)
    assert cert is not None
    assert cert.witness is None
    assert isinstance(cert.provenance, ExternalFact)
    assert cert.provenance.claimed_rank == 1
    assert cert.rank_lower_bound() == 1
    assert cert.verify()


def test_first_nontorsion_skips_torsion():
    assert first_nontorsion_point(WeierstrassCurve(-1, 0), 30) is None
    P = first_nontorsion_point(E25, DEFAULT_SEARCH_BOUND)
    assert P == Point(-4, 6)
