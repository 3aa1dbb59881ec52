import random
from fractions import Fraction

import pytest

from csk3.elliptic import (
    INFINITY,
    MINUS,
    Point,
    WeierstrassCurve,
    add,
    negate,
    on_curve,
    quadratic_twist_class,
)
from csk3.numtheory import SquarefreeClass, squarefree_class
from csk3.quartic import (
    BirationalIdentification,
    QuarticTorsor,
    TorsorPoint,
    TransportError,
    hyperelliptic_involution,
    invariants,
    search_torsor_points,
    to_weierstrass_with_point,
    transported_add,
    weierstrass_model,
)

H25 = QuarticTorsor.fermat(2, 5)    # 5 s^2 = 1 + 4 t^4
H117 = QuarticTorsor.fermat(1, 17)  # 17 s^2 = 1 + t^4


def test_invariants_examples():
    assert invariants((4, 0, 0, 1)) == invariants((4, 0, 0, 1))
    I, J = invariants((4, 0, 0, 1)).I, invariants((4, 0, 0, 1)).J
    assert (I, J) == (48, 0)
    inv = invariants((1, 0, 0, 1))
    assert (inv.I, inv.J) == (12, 0)
    inv = invariants((1, 1, 0, 1))
    assert (inv.I, inv.J) == (13, 70)
    with pytest.raises(ValueError):
        invariants((0, 1, 1, 1))


def test_invariant_weights_under_scaling():
    # replacing t by lambda*t sends (I, J) to (lambda^4 I, lambda^6 J)
    rng = random.Random(4)
    for _ in range(100):
        lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        a, c, d, e = (rng.randint(1, 8) for _ in range(4))
        base = invariants((a, c, d, e))
        scaled = invariants((a * lam ** 4, c * lam ** 2, d * lam, e))
        assert scaled.I == lam ** 4 * base.I
        assert scaled.J == lam ** 6 * base.J


def test_weierstrass_model_examples():
    assert weierstrass_model(H25) == WeierstrassCurve(-1296, 0)
    assert weierstrass_model(QuarticTorsor.fermat(1, 1)) == WeierstrassCurve(-324, 0)


def test_weierstrass_model_twist_class_matches_2a():
    # the Jacobian of s^2 = 1 + a^2 t^4 is the twist of x^3 - x by 2a
    for a in (1, 2, 3):
        model = weierstrass_model(QuarticTorsor.fermat(a, 1))
        assert quadratic_twist_class(model) == (MINUS, squarefree_class(2 * a))


def test_torsor_validation():
    with pytest.raises(ValueError):
        QuarticTorsor(12, (1, 0, 0, 1))       # C not squarefree
    with pytest.raises(ValueError):
        QuarticTorsor(1, (1, -2, 0, 1))       # (t^2 - 1)^2 is not separable
    assert H25.contains(TorsorPoint(1, 1))
    assert not H25.contains(TorsorPoint(1, 2))


def test_search_torsor_points_examples():
    assert TorsorPoint(2, 1) in search_torsor_points(H117, 5)
    assert TorsorPoint(1, 1) in search_torsor_points(H25, 5)
    pts13 = search_torsor_points(QuarticTorsor.fermat(2, 13), 5)
    assert TorsorPoint(3, 5) in pts13
    # canonical order by (height, t, s)
    keys = [(max(abs(P.t.numerator), P.t.denominator), P.t, P.s)
            for P in search_torsor_points(H25, 5)]
    assert keys == sorted(keys)


def test_search_points_satisfy_equation():
    for torsor in (H25, H117):
        for P in search_torsor_points(torsor, 6):
            assert torsor.contains(P)


def test_involution():
    P = TorsorPoint(1, 1)
    assert hyperelliptic_involution(P) == TorsorPoint(1, -1)
    assert hyperelliptic_involution(hyperelliptic_involution(P)) == P


def _generated_points(maps, count):
    """Transported multiples of a non-torsion image, plus involutions."""
    from csk3.elliptic import scalar_mul, torsion_test

    seed = None
    for P in search_torsor_points(maps.torsor, 10):
        W = maps.forward(P)
        if W is not INFINITY and not torsion_test(maps.curve, W).is_torsion:
            seed = W
            break
    assert seed is not None
    out = []
    n = 1
    while len(out) < count:
        for s in (1, -1):
            Q = maps.backward(scalar_mul(maps.curve, s * n, seed))
            out.append(Q)
            out.append(hyperelliptic_involution(Q))
        n += 1
    return out[:count]


@pytest.mark.parametrize("torsor,base", [
    (H25, TorsorPoint(1, 1)),
    (H117, TorsorPoint(2, 1)),
    (QuarticTorsor.fermat(2, 13), TorsorPoint(3, 5)),
])
def test_identification_roundtrip(torsor, base):
    curve, maps = to_weierstrass_with_point(torsor, base)
    assert maps.forward(base) is INFINITY
    assert maps.backward(INFINITY) == base
    for P in _generated_points(maps, 20):
        assert torsor.contains(P)
        W = maps.forward(P)
        assert on_curve(curve, W)
        assert maps.backward(W) == P


def test_identification_rejects_branch_base():
    torsor = QuarticTorsor(1, (1, 0, 0, -1))  # s^2 = t^4 - 1 has (1, 0)
    with pytest.raises(ValueError):
        BirationalIdentification(torsor, TorsorPoint(1, 0))


def test_involution_intertwining():
    # forward(rho2 P) = Q0 - forward(P) with Q0 = forward(rho2 base): the
    # hyperelliptic involution acts as inversion through a fixed point
    curve, maps = to_weierstrass_with_point(H25, TorsorPoint(1, 1))
    Q0 = maps.involution_image()
    assert Q0 == maps.forward(TorsorPoint(1, -1))
    for P in _generated_points(maps, 12):
        lhs = maps.forward(hyperelliptic_involution(P))
        rhs = add(curve, Q0, negate(maps.forward(P)))
        assert lhs == rhs


def test_transported_add_base_identity():
    base = TorsorPoint(1, 1)
    assert transported_add(H25, base, base, base) == base


def test_transported_add_produces_new_exact_points():
    base = TorsorPoint(1, 1)
    P = TorsorPoint(Fraction(1, 2), Fraction(1, 2))
    doubled = transported_add(H25, base, P, P)
    assert doubled not in (base, P)
    assert H25.contains(doubled)


def test_transported_add_group_laws():
    curve, maps = to_weierstrass_with_point(H25, TorsorPoint(1, 1))
    pts = _generated_points(maps, 6)
    rng = random.Random(5)
    for _ in range(25):
        P, Q, R = (rng.choice(pts) for _ in range(3))
        assert maps.transported_add(P, Q) == maps.transported_add(Q, P)
        left = maps.transported_add(maps.transported_add(P, Q), R)
        right = maps.transported_add(P, maps.transported_add(Q, R))
        assert left == right


def test_involution_is_inversion_through_its_base_image():
    # in the transported group, P + rho2(P) is constantly rho2(base)
    base = TorsorPoint(1, 1)
    _, maps = to_weierstrass_with_point(H25, base)
    for P in _generated_points(maps, 8):
        total = maps.transported_add(P, hyperelliptic_involution(P))
        assert total == hyperelliptic_involution(base)


def test_transport_error_on_exceptional_set():
    # s^2 = 1 + t^4 has rational places over t = infinity; their Weierstrass
    # images are the y = 0 points, where backward cannot land
    torsor = QuarticTorsor.fermat(1, 1)
    curve, maps = to_weierstrass_with_point(torsor, TorsorPoint(0, 1))
    assert curve == WeierstrassCurve(-4, 0)
    with pytest.raises(TransportError):
        maps.backward(Point(2, 0))
    with pytest.raises(TransportError):
        maps.backward(Point(-2, 0))
    # the remaining y = 0 point is the involuted base, which is fine
    assert maps.backward(Point(0, 0)) == TorsorPoint(0, -1)
