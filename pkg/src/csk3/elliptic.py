"""Exact group-law arithmetic on short Weierstrass curves over Q and their
quadratic twists, torsion detection, bounded naive point search, and
rank-positivity certificates.

Curves come in two flavours sharing one chord-tangent core:

  * WeierstrassCurve(A, B):            y^2 = x^3 + A x + B
  * TwistedCurve(D, family):       D * y^2 = x^3 -+ x

The "minus" family D y^2 = x^3 - x is the congruent-number family; "plus"
is D y^2 = x^3 + x.  A twisted curve is isomorphic over Q to its normalized
model y^2 = x^3 -+ D^2 x via (x, y) |-> (D x, D^2 y).

All arithmetic is exact rational; there is no floating point here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .numtheory import (
    Factorization,
    SquarefreeClass,
    factorize,
    is_perfect_square,
    is_squarefree,
    rational_square_root,
)

MINUS = "minus"  # D y^2 = x^3 - x (congruent-number family)
PLUS = "plus"    # D y^2 = x^3 + x

DEFAULT_SEARCH_BOUND = 100
DESCENT_TORSOR_CAP = 1000


class OffCurveError(ValueError):
    """A point handed to a group-law operation does not lie on the curve."""


class _InfinityPoint:
    """The point at infinity (group identity); a singleton."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Infinity"


INFINITY = _InfinityPoint()


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class Point:
    """An affine point with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __init__(self, x, y):
        object.__setattr__(self, "x", _frac(x))
        object.__setattr__(self, "y", _frac(y))

    def __iter__(self):
        return iter((self.x, self.y))

    def __repr__(self):
        return f"({self.x}, {self.y})"


CurvePoint = Point | _InfinityPoint


def naive_height(x: Fraction) -> int:
    """max(|numerator|, denominator) of a rational in lowest terms."""
    return max(abs(x.numerator), x.denominator)


def point_height(P: CurvePoint) -> int:
    return 0 if P is INFINITY else naive_height(P.x)


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = x^3 + A x + B over Q."""

    A: Fraction
    B: Fraction

    def __init__(self, A, B):
        A, B = _frac(A), _frac(B)
        if 4 * A ** 3 + 27 * B ** 2 == 0:
            raise ValueError("singular curve: 4A^3 + 27B^2 = 0")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    def model_coefficients(self) -> tuple[Fraction, Fraction, Fraction]:
        """(d, A, B) of the working model d y^2 = x^3 + A x + B."""
        return (Fraction(1), self.A, self.B)

    def __repr__(self):
        return f"y^2 = x^3 + ({self.A})x + ({self.B})"


@dataclass(frozen=True)
class TwistedCurve:
    """D y^2 = x^3 -+ x with squarefree nonzero D."""

    D: int
    family: str = MINUS

    def __post_init__(self):
        if self.family not in (MINUS, PLUS):
            raise ValueError(f"unknown family {self.family!r}")
        if self.D == 0 or not is_squarefree(self.D):
            raise ValueError(f"twist parameter must be squarefree nonzero, got {self.D}")

    def model_coefficients(self) -> tuple[Fraction, Fraction, Fraction]:
        sign = -1 if self.family == MINUS else 1
        return (Fraction(self.D), Fraction(sign), Fraction(0))

    def normalized(self) -> WeierstrassCurve:
        """The isomorphic model y^2 = x^3 -+ D^2 x."""
        sign = -1 if self.family == MINUS else 1
        return WeierstrassCurve(sign * self.D ** 2, 0)

    def two_torsion_x(self) -> tuple[Fraction, ...]:
        """x-coordinates of the affine rational 2-torsion on this model."""
        if self.family == MINUS:
            return (Fraction(-1), Fraction(0), Fraction(1))
        return (Fraction(0),)

    def __repr__(self):
        op = "-" if self.family == MINUS else "+"
        return f"{self.D} y^2 = x^3 {op} x"


Curve = WeierstrassCurve | TwistedCurve


def on_curve(curve: Curve, P: CurvePoint) -> bool:
    """Exact membership test; Infinity is on every curve."""
    if P is INFINITY:
        return True
    d, A, B = curve.model_coefficients()
    return d * P.y ** 2 == P.x ** 3 + A * P.x + B


def _require_on_curve(curve: Curve, P: CurvePoint) -> None:
    if not on_curve(curve, P):
        raise OffCurveError(f"{P!r} is not on {curve!r}")


def negate(P: CurvePoint) -> CurvePoint:
    if P is INFINITY:
        return INFINITY
    return Point(P.x, -P.y)


def add(curve: Curve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Chord-tangent sum on d y^2 = x^3 + A x + B."""
    _require_on_curve(curve, P)
    _require_on_curve(curve, Q)
    if P is INFINITY:
        return Q
    if Q is INFINITY:
        return P
    d, A, _ = curve.model_coefficients()
    if P.x == Q.x:
        if P.y == -Q.y:
            return INFINITY
        slope = (3 * P.x ** 2 + A) / (2 * d * P.y)
    else:
        slope = (Q.y - P.y) / (Q.x - P.x)
    x3 = d * slope ** 2 - P.x - Q.x
    y3 = -(P.y + slope * (x3 - P.x))
    return Point(x3, y3)


def scalar_mul(curve: Curve, n: int, P: CurvePoint) -> CurvePoint:
    """n * P by double-and-add."""
    _require_on_curve(curve, P)
    if n < 0:
        return scalar_mul(curve, -n, negate(P))
    result: CurvePoint = INFINITY
    addend = P
    while n:
        if n & 1:
            result = add(curve, result, addend)
        addend = add(curve, addend, addend)
        n >>= 1
    return result


@dataclass(frozen=True)
class TorsionStatus:
    order: int | None  # None means non-torsion

    @property
    def is_torsion(self) -> bool:
        return self.order is not None

    def __repr__(self):
        return f"Torsion({self.order})" if self.is_torsion else "NonTorsion"


def torsion_test(curve: Curve, P: CurvePoint) -> TorsionStatus:
    """Decide torsion by checking n*P = O for n <= 12 (Mazur's bound over Q)."""
    _require_on_curve(curve, P)
    if P is INFINITY:
        return TorsionStatus(1)
    R: CurvePoint = P
    for n in range(2, 13):
        R = add(curve, R, P)
        if R is INFINITY:
            return TorsionStatus(n)
    return TorsionStatus(None)


def _square_denominator_model(curve: Curve) -> bool:
    """Whether x-denominators of rational points are forced to be squares
    (true for y^2 = x^3 + Ax + B with integral A, B)."""
    d, A, B = curve.model_coefficients()
    return d == 1 and A.denominator == 1 and B.denominator == 1


def _x_candidates_at_height(h: int, square_denominators: bool):
    """Rationals x = m/n in lowest terms with max(|m|, n) == h, ascending."""
    out = []
    for m in (-h, h):
        n = 1
        while n <= h:
            if gcd(m, n) == 1 and (not square_denominators or is_perfect_square(n)):
                out.append(Fraction(m, n))
            n += 1
    if not square_denominators or is_perfect_square(h):
        for m in range(-h + 1, h):
            if gcd(m, h) == 1:
                out.append(Fraction(m, h))
    out.sort()
    return out


def _solve_for_y(curve: Curve, x: Fraction) -> Fraction | None:
    d, A, B = curve.model_coefficients()
    if d == 1 and A.denominator == 1 and B.denominator == 1:
        # integral model with x = m/e^2: y = u/e^3 with an integer square test
        e = isqrt(x.denominator)
        if e * e == x.denominator:
            m = x.numerator
            N = m ** 3 + int(A) * m * e ** 4 + int(B) * e ** 6
            if N < 0:
                return None
            u = isqrt(N)
            return Fraction(u, e ** 3) if u * u == N else None
    return rational_square_root((x ** 3 + A * x + B) / d)


def search_points(curve: Curve, height_bound: int) -> list[Point]:
    """All affine points with max(|x-numerator|, x-denominator) <= height_bound.

    For integral y^2 = x^3 + Ax + B models only square x-denominators can occur,
    so those are the only ones scanned there.  Results are in canonical order
    (height, x, y).
    """
    if height_bound < 1:
        raise ValueError("height bound must be >= 1")
    sq = _square_denominator_model(curve)
    found = []
    for h in range(1, height_bound + 1):
        for x in _x_candidates_at_height(h, sq):
            y = _solve_for_y(curve, x)
            if y is None:
                continue
            if y == 0:
                found.append(Point(x, 0))
            else:
                found.append(Point(x, -y))
                found.append(Point(x, y))
    found.sort(key=lambda P: (naive_height(P.x), P.x, P.y))
    return found


def first_nontorsion_point(curve: Curve, height_bound: int) -> Point | None:
    """Non-torsion point with the smallest (height, x) in scan order, or None.

    Of the pair (x, +-y) the positive-y representative is returned; torsion
    status does not depend on the sign.
    """
    sq = _square_denominator_model(curve)
    for h in range(1, height_bound + 1):
        for x in _x_candidates_at_height(h, sq):
            y = _solve_for_y(curve, x)
            if y is None or y == 0:
                continue  # y = 0 points are 2-torsion
            P = Point(x, abs(y))
            if not torsion_test(curve, P).is_torsion:
                return P
    return None


# ---------------------------------------------------------------------------
# model changes


def normalize_twist(D: int, P: CurvePoint, family: str = MINUS) -> CurvePoint:
    """(x, y) on D y^2 = x^3 -+ x  |->  (D x, D^2 y) on y^2 = x^3 -+ D^2 x."""
    curve = TwistedCurve(D, family)
    _require_on_curve(curve, P)
    if P is INFINITY:
        return INFINITY
    Q = Point(D * P.x, D ** 2 * P.y)
    assert on_curve(curve.normalized(), Q)
    return Q


def denormalize_twist(D: int, P: CurvePoint, family: str = MINUS) -> CurvePoint:
    """Inverse of normalize_twist."""
    curve = TwistedCurve(D, family)
    _require_on_curve(curve.normalized(), P)
    if P is INFINITY:
        return INFINITY
    Q = Point(P.x / D, P.y / D ** 2)
    assert on_curve(curve, Q)
    return Q


def rescale_twist_point(M_from, M_to, P: CurvePoint) -> CurvePoint:
    """Move a point between models M y^2 = x^3 - x when M_from/M_to is a
    rational square: (x, y) |-> (x, r y) with r^2 = M_from/M_to."""
    if P is INFINITY:
        return INFINITY
    r = rational_square_root(Fraction(M_from) / Fraction(M_to))
    if r is None:
        raise ValueError(f"{M_from} and {M_to} are not in the same square class")
    return Point(P.x, r * P.y)


def quadratic_twist_class(curve: WeierstrassCurve) -> tuple[str, SquarefreeClass] | None:
    """Identify y^2 = x^3 + A x (B = 0) as a quadratic twist of x^3 -+ x.

    Returns (family, class) when |A| is a square times a fourth power, i.e.
    A = -+ D^2 lambda^4; otherwise None (the curve is a quartic twist).
    """
    if curve.B != 0 or curve.A == 0:
        return None
    family = MINUS if curve.A < 0 else PLUS
    n = abs(curve.A)
    root = rational_square_root(n)
    if root is None:
        return None
    kernel = factorize(root.numerator * root.denominator).squarefree_kernel()
    return (family, SquarefreeClass(kernel))


# ---------------------------------------------------------------------------
# rank-positivity certificates


@dataclass(frozen=True)
class SearchFound:
    """Provenance: witness located by exhaustive search (directly on the
    normalized model, or transported from an associated quartic)."""

    height_bound: int
    method: str = "naive"  # "naive" or "quartic-descent"


@dataclass(frozen=True)
class ExternalFact:
    """Provenance: rank asserted by a curated external source, never verified
    here beyond bookkeeping.  Always flagged as such in reports."""

    claimed_rank: int
    citation: str


Provenance = SearchFound | ExternalFact


@dataclass(frozen=True)
class RankPositivityCertificate:
    """Witness that rank(E^D(Q)) > 0, or an external claim of the rank.

    The witness, when present, lives on the normalized model
    y^2 = x^3 -+ D^2 x and must be non-torsion.
    """

    curve: TwistedCurve
    witness: Point | None
    provenance: Provenance

    def rank_lower_bound(self) -> int:
        if isinstance(self.provenance, ExternalFact):
            return self.provenance.claimed_rank
        return 1

    def is_external(self) -> bool:
        return isinstance(self.provenance, ExternalFact)

    def verify(self) -> bool:
        """Exact re-verification: witness on curve and non-torsion."""
        if self.witness is None:
            return isinstance(self.provenance, ExternalFact)
        model = self.curve.normalized()
        if not on_curve(model, self.witness):
            return False
        return not torsion_test(model, self.witness).is_torsion


def _descent_sources(D: int) -> list[tuple[int, int]]:
    """(a, C) pairs of quartics C s^2 = 1 + a^2 t^4 whose twisted points
    transport to the minus-family twist class D."""
    if D <= 0:
        return []
    sources = [(2, D)]  # squarefree class of 2*2*D is D
    if D % 2 == 0:
        sources.append((1, D // 2))  # class of 2*(D/2) is D
    return sources


def _certify_by_quartic_descent(D: int, search_budget: int) -> Point | None:
    """Search small points on associated quartics and transport them to the
    normalized model y^2 = x^3 - D^2 x; return the first non-torsion image.

    This finds generators whose naive height is far beyond direct search
    range (the usual gain of working on a 2-covering).
    """
    from . import quartic  # deferred: quartic builds on this module

    target = TwistedCurve(D, MINUS).normalized()
    cap = min(search_budget, DESCENT_TORSOR_CAP)
    for a, C in _descent_sources(D):
        torsor = quartic.QuarticTorsor.fermat(a, C)
        seeds = quartic.first_torsor_points(torsor, cap)
        if not seeds:
            continue
        base = seeds[0]
        model, maps = quartic.to_weierstrass_with_point(torsor, base)
        identified = quadratic_twist_class(model)
        if identified is None or identified != (MINUS, SquarefreeClass(D)):
            continue
        # model is y^2 = x^3 - D^2 mu^4 x; rescale by mu to reach the target
        root = rational_square_root(-model.A)
        assert root is not None  # guaranteed by the class identification
        mu2 = root / D
        mu = rational_square_root(mu2)
        assert mu is not None
        candidates = []
        for T in seeds:
            candidates.append(T)
            candidates.append(quartic.hyperelliptic_involution(T))
        for T in candidates:
            W = maps.forward(T)
            if W is INFINITY:
                continue
            P = Point(W.x / mu2, W.y / (mu2 * mu))
            if not on_curve(target, P):
                continue
            if not torsion_test(target, P).is_torsion:
                return P
    return None


def certify_positive_rank(
    D: int,
    family: str = MINUS,
    search_budget: int = DEFAULT_SEARCH_BOUND,
    allow_external_facts: bool = False,
    facts=None,
    use_quartic_descent: bool = True,
) -> RankPositivityCertificate | None:
    """Try to certify rank(E^D(Q)) > 0; None means inconclusive.

    Strategy, in order: naive search on the normalized model up to the budget;
    for the minus family, point transport from the associated quartics; and,
    only when the caller opts in, a curated external-fact table (such
    certificates carry no witness point and are flagged).
    """
    curve = TwistedCurve(D, family)
    witness = first_nontorsion_point(curve.normalized(), search_budget)
    if witness is not None:
        return RankPositivityCertificate(curve, witness, SearchFound(search_budget))
    if family == MINUS and use_quartic_descent:
        witness = _certify_by_quartic_descent(D, search_budget)
        if witness is not None:
            return RankPositivityCertificate(
                curve, witness, SearchFound(search_budget, method="quartic-descent"))
    if allow_external_facts:
        from .facts import lookup_fact
        fact = lookup_fact(D, family, facts)
        if fact is not None and fact.rank > 0:
            return RankPositivityCertificate(
                curve, None, ExternalFact(fact.rank, fact.citation))
    return None
