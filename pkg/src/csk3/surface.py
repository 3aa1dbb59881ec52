"""The twisted Kummer pencil d (1 + a^2 T^4) Y^2 = X^3 - X: the double
covering from products of twisted curves, the evaluation-class map behind
the torsor decomposition of its rational points, simultaneous-positive-rank
certificates, and exact atlas generation.

Points enter through pairs (curve point, quartic point) sharing a squarefree
class C: a point on Cd y^2 = x^3 - x and a point on C s^2 = 1 + a^2 t^4 glue
to the surface point (x, y/s, t).  Atlases fan such pairs out along group-law
multiples on the curve side and transported multiples on the quartic side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .elliptic import (
    INFINITY,
    CurvePoint,
    Point,
    RankPositivityCertificate,
    TwistedCurve,
    add,
    certify_positive_rank,
    denormalize_twist,
    negate,
    rescale_twist_point,
    scalar_mul,
    torsion_test,
)
from .numtheory import (
    SquarefreeClass,
    is_squarefree,
    rational_square_root,
    squarefree_class,
)
from .quartic import (
    BirationalIdentification,
    QuarticTorsor,
    TorsorPoint,
    TransportError,
    first_torsor_points,
    hyperelliptic_involution,
    _points_at_height,
)

DEFAULT_SPR_BUDGET = 100
_TORSOR_SEED_SCAN = 200


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class SurfaceFamily:
    """d (1 + a^2 T^4) Y^2 = X^3 - X with squarefree nonzero d and a."""

    d: int
    a: int

    def __post_init__(self):
        if self.d == 0 or not is_squarefree(self.d):
            raise ValueError(f"d must be squarefree nonzero, got {self.d}")
        if self.a == 0 or not is_squarefree(self.a):
            raise ValueError(f"a must be squarefree nonzero, got {self.a}")

    def coefficient(self, T) -> Fraction:
        T = _frac(T)
        return self.d * (1 + self.a ** 2 * T ** 4)

    def __repr__(self):
        return f"{self.d}(1 + {self.a ** 2} T^4) Y^2 = X^3 - X"


@dataclass(frozen=True)
class SurfacePoint:
    X: Fraction
    Y: Fraction
    T: Fraction
    exceptional: bool = field(compare=False, default=False)

    def __init__(self, X, Y, T):
        object.__setattr__(self, "X", _frac(X))
        object.__setattr__(self, "Y", _frac(Y))
        object.__setattr__(self, "T", _frac(T))
        object.__setattr__(self, "exceptional",
                           self.Y == 0 or self.X in (0, 1, -1))

    def __repr__(self):
        return f"(X={self.X}, Y={self.Y}, T={self.T})"


def surface_contains(family: SurfaceFamily, point: SurfacePoint) -> bool:
    """Exact test of d (1 + a^2 T^4) Y^2 = X^3 - X."""
    lhs = family.coefficient(point.T) * point.Y ** 2
    return lhs == point.X ** 3 - point.X


def evaluation_class(a: int, T) -> SquarefreeClass:
    """Squarefree class of 1 + a^2 T^4: the class [C] of the twisted pair
    parametrizing the surface point over T."""
    return squarefree_class(1 + a * a * _frac(T) ** 4)


def fiber_twist_class(d: int, a: int, T) -> SquarefreeClass:
    """Squarefree class of d (1 + a^2 T^4): the fiber over T is the twist of
    y^2 = x^3 - x by this class."""
    return squarefree_class(d * (1 + a * a * _frac(T) ** 4))


def phi_map(d: int, a: int, C: int, curve_point: Point,
            torsor_point: TorsorPoint) -> SurfacePoint:
    """The double-covering map: ((x, y), (t, s)) |-> (x, y/s, t).

    Inputs must satisfy C d y^2 = x^3 - x and C s^2 = 1 + a^2 t^4 exactly,
    with s != 0 (the branch locus is excluded).
    """
    torsor = QuarticTorsor.fermat(a, C)
    if not torsor.contains(torsor_point):
        raise ValueError(f"{torsor_point!r} is not on {torsor!r} (mismatched C?)")
    if torsor_point.s == 0:
        raise ValueError("torsor point on the branch locus (s = 0)")
    x, y = curve_point
    if C * d * y ** 2 != x ** 3 - x:
        raise ValueError(f"{curve_point!r} is not on {C * d} y^2 = x^3 - x")
    out = SurfacePoint(x, y / torsor_point.s, torsor_point.t)
    assert surface_contains(SurfaceFamily(d, a), out)
    return out


def glue_twisted_pair(d: int, curve, torsor: QuarticTorsor, curve_point: Point,
                      torsor_point: TorsorPoint) -> tuple[Fraction, Fraction, Fraction]:
    """General form of the double covering for a pair sharing the class C:
    a point on C d y^2 = g(x) (g from a short Weierstrass `curve`) and a
    point on C s^2 = f(t) glue to (X, Y, T) = (x, y/s, t) on the surface
    d f(T) Y^2 = g(X).

    The quadratic-quartic specialization above is the first-class citizen;
    this hook covers arbitrary separable quartics f and cubics g.
    """
    if torsor_point.s == 0:
        raise ValueError("torsor point on the branch locus (s = 0)")
    if not torsor.contains(torsor_point):
        raise ValueError(f"{torsor_point!r} is not on {torsor!r}")
    x, y = curve_point
    g_of_x = x ** 3 + curve.A * x + curve.B
    if torsor.C * d * y ** 2 != g_of_x:
        raise ValueError(f"{curve_point!r} is not on {torsor.C * d} y^2 = g(x)")
    X, Y, T = x, y / torsor_point.s, torsor_point.t
    assert d * torsor.g(T) * Y ** 2 == g_of_x
    return (X, Y, T)


# ---------------------------------------------------------------------------
# simultaneous positive rank


@dataclass(frozen=True)
class SprCertificate:
    """Witnesses that, for the class [C], both twisted factors of the surface
    carry infinitely many rational points: a point trivializing the quartic
    torsor, a positive-rank witness for its Jacobian twist, and one for the
    twisted fiber curve."""

    d: int
    a: int
    C: int
    torsor_witness: TorsorPoint
    jacobian_witness: RankPositivityCertificate
    curve_witness: RankPositivityCertificate

    def uses_external_facts(self) -> bool:
        return self.jacobian_witness.is_external() or self.curve_witness.is_external()

    def verify(self) -> bool:
        torsor = QuarticTorsor.fermat(self.a, self.C)
        if not torsor.contains(self.torsor_witness):
            return False
        jac_class = squarefree_class(2 * self.a * self.C)
        if self.jacobian_witness.curve.D != jac_class.representative:
            return False
        fiber_class = squarefree_class(self.d * self.C)
        if self.curve_witness.curve.D != fiber_class.representative:
            return False
        return self.jacobian_witness.verify() and self.curve_witness.verify()


@dataclass(frozen=True)
class SprOutcome:
    """Per-leg outcome of an SPR search; certificate is None when any leg
    came back empty within budget."""

    d: int
    a: int
    C: int
    torsor_witness: TorsorPoint | None
    jacobian_witness: RankPositivityCertificate | None
    curve_witness: RankPositivityCertificate | None

    @property
    def certificate(self) -> SprCertificate | None:
        if None in (self.torsor_witness, self.jacobian_witness, self.curve_witness):
            return None
        return SprCertificate(self.d, self.a, self.C, self.torsor_witness,
                              self.jacobian_witness, self.curve_witness)

    @property
    def inconclusive_legs(self) -> list[str]:
        legs = []
        if self.torsor_witness is None:
            legs.append("torsor")
        if self.jacobian_witness is None:
            legs.append("jacobian")
        if self.curve_witness is None:
            legs.append("curve")
        return legs


def spr_check(d: int, a: int, C: int,
              search_budget: int = DEFAULT_SPR_BUDGET,
              allow_external_facts: bool = False) -> SprOutcome:
    """Assemble the three legs of the simultaneous-positive-rank condition
    for class [C]: a rational point on C s^2 = 1 + a^2 t^4, a non-torsion
    point on the twist by the class of 2aC (the torsor's Jacobian), and one
    on the twist by the class of dC (the fiber side).

    Rank legs may fall back to flagged external facts when allowed; the
    torsor leg always needs a genuine point.
    """
    if not is_squarefree(d) or d == 0 or not is_squarefree(C):
        raise ValueError("d and C must be squarefree (d nonzero)")
    if C < 1:
        raise ValueError(f"C must be positive, got {C}")
    torsor = QuarticTorsor.fermat(a, C)
    orbit = first_torsor_points(torsor, min(search_budget, 1000))
    torsor_witness = orbit[0] if orbit else None

    jac_class = squarefree_class(2 * a * C).representative
    jacobian_witness = certify_positive_rank(
        jac_class, search_budget=search_budget,
        allow_external_facts=allow_external_facts)

    curve_class = squarefree_class(d * C).representative
    curve_witness = certify_positive_rank(
        curve_class, search_budget=search_budget,
        allow_external_facts=allow_external_facts)

    return SprOutcome(d, a, C, torsor_witness, jacobian_witness, curve_witness)


# ---------------------------------------------------------------------------
# atlas generation


@dataclass(frozen=True)
class Atlas:
    """A batch of exact surface points generated from one SPR certificate,
    all lying over the single evaluation class [C]."""

    d: int
    a: int
    C: int
    grid: tuple[int, int]
    points: tuple[SurfacePoint, ...]
    skipped_exceptional: int

    def t_values(self) -> list[Fraction]:
        return sorted({P.T for P in self.points})


def _torsor_seed(torsor: QuarticTorsor, maps: BirationalIdentification,
                 scan_bound: int = _TORSOR_SEED_SCAN) -> TorsorPoint | None:
    """A torsor point whose image under the identification is non-torsion;
    transported multiples of it sweep out infinitely many t-values.
    Positive orientation (t > 0, then s > 0) is preferred at equal height."""
    for h in range(1, scan_bound + 1):
        candidates = sorted(_points_at_height(torsor, h),
                            key=lambda P: (P.t < 0, -P.t, P.s < 0, -P.s))
        for P in candidates:
            W = maps.forward(P)
            if W is INFINITY:
                continue
            if not torsion_test(maps.curve, W).is_torsion:
                return P
    return None


def atlas_generate(d: int, a: int, C: int, certificate: SprCertificate,
                   grid: tuple[int, int]) -> Atlas:
    """Surface points phi(+-i*P + tau, Q_j) for i <= grid[0], 2-torsion
    translates tau, and transported torsor multiples Q_j (with their
    involutions), j <= grid[1].

    Points landing on the excluded locus (s = 0, y = 0, x in {0, +-1}, or
    torsor points lying over 2-torsion) are skipped and counted, not errors.
    The curve side is generated first: group-law multiples are much cheaper
    than transported quartic arithmetic.
    """
    max_i, max_j = grid
    if max_i < 1 or max_j < 1:
        raise ValueError("grid bounds must be >= 1")
    if (certificate.d, certificate.a, certificate.C) != (d, a, C):
        raise ValueError("certificate does not match the requested family")
    if certificate.curve_witness.witness is None:
        raise ValueError("atlas generation needs a search-found curve witness")
    if not certificate.verify():
        raise ValueError("certificate failed re-verification")

    skipped = 0
    D0 = squarefree_class(d * C).representative
    twisted = TwistedCurve(D0)
    normalized = twisted.normalized()
    W = certificate.curve_witness.witness
    M = C * d  # literal coefficient of the twisted model fed into phi

    curve_side: list[Point] = []
    two_torsion: list[CurvePoint] = [INFINITY, Point(0, 0),
                                     Point(D0, 0), Point(-D0, 0)]
    for i in range(1, max_i + 1):
        base = scalar_mul(normalized, i, W)
        for tau in two_torsion:
            for sign in (1, -1):
                R = add(normalized, base if sign == 1 else negate(base), tau)
                if R is INFINITY or R.y == 0:
                    skipped += 1  # excluded locus on the curve factor
                    continue
                curve_side.append(rescale_twist_point(D0, M, denormalize_twist(D0, R)))

    torsor = QuarticTorsor.fermat(a, C)
    maps = BirationalIdentification(torsor, certificate.torsor_witness)
    seed = _torsor_seed(torsor, maps)
    torsor_side: list[TorsorPoint] = []
    if seed is None:
        # no non-torsion seed in scan range: fall back to the witness orbit
        torsor_side = [certificate.torsor_witness,
                       hyperelliptic_involution(certificate.torsor_witness)]
    else:
        image = maps.forward(seed)
        for j in range(1, max_j + 1):
            try:
                Q = maps.backward(scalar_mul(maps.curve, j, image))
            except TransportError:
                skipped += 1
                continue
            for cand in (Q, hyperelliptic_involution(Q)):
                if cand.s == 0:
                    skipped += 1
                    continue
                img = maps.forward(cand)
                if img is not INFINITY and img.y == 0:
                    skipped += 1  # lies over transported 2-torsion
                    continue
                torsor_side.append(cand)

    family = SurfaceFamily(d, a)
    seen: set[tuple[Fraction, Fraction, Fraction]] = set()
    points: list[SurfacePoint] = []
    for E_pt in curve_side:
        for T_pt in torsor_side:
            # class coherence: 1 + a^2 t^4 must equal C times a square
            assert rational_square_root((1 + a * a * T_pt.t ** 4) / C) is not None
            S = phi_map(d, a, C, E_pt, T_pt)
            if S.exceptional:
                skipped += 1
                continue
            key = (S.X, S.Y, S.T)
            if key in seen:
                continue
            seen.add(key)
            assert surface_contains(family, S)
            points.append(S)
    points.sort(key=lambda P: (P.T, P.X, P.Y))
    return Atlas(d, a, C, (max_i, max_j), tuple(points), skipped)
