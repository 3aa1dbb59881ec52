"""Hyperelliptic quartic torsors C s^2 = G(t), their cubic invariants and
Weierstrass models, and exact point generation through a birational
identification once a rational point is known.

The quartic is kept in depressed form G(t) = a t^4 + c t^2 + d t + e
(no cubic term); callers must depress a general quartic by translating t
first.  With a rational base point P0 = (t0, s0), s0 != 0, the torsor is
identified birationally with a short Weierstrass curve:

  1. translate t so the base point sits at t = 0,
  2. invert (w = 1/t), which pushes the base point to the two places at
     infinity and makes the leading quartic coefficient a nonzero square,
  3. complete the square against the quartic,
  4. fold the leftover linear remainder into a plane cubic.

forward(P0) = Infinity, and backward(forward(P)) = P away from a finite
exceptional set (the torsor's own places over t = infinity).  The
hyperelliptic involution s |-> -s does not become plain negation under any
birational identification whose origin is off the branch locus; it becomes
inversion through the fixed curve point forward((t0, -s0)), and that exact
intertwining is what the tests pin down.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .elliptic import (
    INFINITY,
    CurvePoint,
    Point,
    WeierstrassCurve,
    add,
    negate,
    on_curve,
    scalar_mul,
)
from .numtheory import is_squarefree, rational_square_root


class TransportError(ArithmeticError):
    """A transported operation landed in the exceptional set; the caller may
    retry with a translated input."""


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class TorsorPoint:
    t: Fraction
    s: Fraction

    def __init__(self, t, s):
        object.__setattr__(self, "t", _frac(t))
        object.__setattr__(self, "s", _frac(s))

    def __iter__(self):
        return iter((self.t, self.s))

    def __repr__(self):
        return f"({self.t}, {self.s})"


def hyperelliptic_involution(P: TorsorPoint) -> TorsorPoint:
    """(t, s) |-> (t, -s); squares to the identity, fixes the branch locus."""
    return TorsorPoint(P.t, -P.s)


@dataclass(frozen=True)
class QuarticInvariants:
    I: Fraction
    J: Fraction


def invariants(coefficients) -> QuarticInvariants:
    """Cubic invariants of a depressed quartic a t^4 + c t^2 + d t + e:

        I = 12 a e + c^2,   J = 72 a c e - 27 a d^2 - 2 c^3.
    """
    a, c, d, e = (_frac(v) for v in coefficients)
    if a == 0:
        raise ValueError("leading quartic coefficient must be nonzero")
    return QuarticInvariants(12 * a * e + c ** 2,
                             72 * a * c * e - 27 * a * d ** 2 - 2 * c ** 3)


@dataclass(frozen=True)
class QuarticTorsor:
    """C s^2 = G(t) with squarefree C and separable depressed quartic G."""

    C: int
    coefficients: tuple[Fraction, Fraction, Fraction, Fraction]

    def __init__(self, C, coefficients):
        if C == 0 or not is_squarefree(C):
            raise ValueError(f"twist C must be squarefree nonzero, got {C}")
        coeffs = tuple(_frac(v) for v in coefficients)
        if len(coeffs) != 4:
            raise ValueError("expected coefficients (a, c, d, e)")
        inv = invariants(coeffs)
        if 4 * inv.I ** 3 - inv.J ** 2 == 0:
            raise ValueError("quartic is not separable")
        object.__setattr__(self, "C", int(C))
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def fermat(cls, a: int, C: int) -> "QuarticTorsor":
        """The Fermat-type quartic C s^2 = 1 + a^2 t^4."""
        if a == 0:
            raise ValueError("a must be nonzero")
        return cls(C, (a * a, 0, 0, 1))

    def g(self, t) -> Fraction:
        a, c, d, e = self.coefficients
        t = _frac(t)
        return a * t ** 4 + c * t ** 2 + d * t + e

    def contains(self, P: TorsorPoint) -> bool:
        return self.C * P.s ** 2 == self.g(P.t)

    def invariants(self) -> QuarticInvariants:
        return invariants(self.coefficients)

    def __repr__(self):
        a, c, d, e = self.coefficients
        return f"{self.C} s^2 = {a} t^4 + {c} t^2 + {d} t + {e}"


def _require_on_torsor(torsor: QuarticTorsor, P: TorsorPoint) -> None:
    if not torsor.contains(P):
        raise ValueError(f"{P!r} is not on {torsor!r}")


def weierstrass_model(torsor: QuarticTorsor) -> WeierstrassCurve:
    """The Weierstrass curve u^2 = v^3 - 27 I v - 27 J attached to G.

    The torsor's Jacobian is this curve twisted by C; tracking that extra
    twist is the caller's bookkeeping.
    """
    inv = torsor.invariants()
    return WeierstrassCurve(-27 * inv.I, -27 * inv.J)


# ---------------------------------------------------------------------------
# point search


def torsor_point_height(P: TorsorPoint) -> int:
    return max(abs(P.t.numerator), P.t.denominator)


def _points_at_height(torsor: QuarticTorsor, h: int) -> list[TorsorPoint]:
    out = []
    ts = []
    for l in (-h, h):
        for m in range(1, h + 1):
            if gcd(l, m) == 1:
                ts.append(Fraction(l, m))
    for l in range(-h + 1, h):
        if gcd(l, h) == 1:
            ts.append(Fraction(l, h))
    for t in sorted(ts):
        s = rational_square_root(torsor.g(t) / torsor.C)
        if s is None:
            continue
        if s == 0:
            out.append(TorsorPoint(t, 0))
        else:
            out.append(TorsorPoint(t, -s))
            out.append(TorsorPoint(t, s))
    return out


def search_torsor_points(torsor: QuarticTorsor, height_bound: int) -> list[TorsorPoint]:
    """All points with t = l/m, |l| <= bound, m <= bound, in canonical
    (height, t, s) order."""
    if height_bound < 1:
        raise ValueError("height bound must be >= 1")
    found = []
    for h in range(1, height_bound + 1):
        found.extend(_points_at_height(torsor, h))
    found.sort(key=lambda P: (torsor_point_height(P), P.t, P.s))
    return found


def first_torsor_points(torsor: QuarticTorsor, height_bound: int) -> list[TorsorPoint]:
    """Scan heights in increasing order and return the points at the first
    height where any exist (the full involution orbit comes along for free).
    Empty list when nothing is found within the bound."""
    for h in range(1, height_bound + 1):
        pts = _points_at_height(torsor, h)
        if pts:
            return sorted(pts, key=lambda P: (P.t, P.s))
    return []


# ---------------------------------------------------------------------------
# birational identification with a Weierstrass model


class BirationalIdentification:
    """Exact birational maps between a pointed torsor and a short Weierstrass
    curve, with the base point sent to Infinity."""

    def __init__(self, torsor: QuarticTorsor, base: TorsorPoint):
        _require_on_torsor(torsor, base)
        if base.s == 0:
            raise ValueError("base point lies on the branch locus (s = 0)")
        self.torsor = torsor
        self.base = base
        C = Fraction(torsor.C)
        a, c, d, e = torsor.coefficients
        t0, s0 = base.t, base.s
        # G(t0 + tau) coefficients, then invert tau -> 1/w and scale by C so
        # the quartic in w has square leading coefficient p^2, p = C s0
        g4, g3 = a, 4 * a * t0
        g2 = 6 * a * t0 ** 2 + c
        g1 = 4 * a * t0 ** 3 + 2 * c * t0 + d
        g0 = C * s0 ** 2
        h4, h3, h2, h1, h0 = C * g0, C * g1, C * g2, C * g3, C * g4
        p = C * s0
        assert h4 == p * p
        beta = h3 / (2 * p)
        kappa = (h2 - beta ** 2) / (2 * p)
        self.p, self.beta, self.kappa = p, beta, kappa
        self.R1 = h1 - 2 * beta * kappa
        self.R0 = h0 - kappa ** 2
        # completing the square folds the w-quartic into the long model
        #   y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x
        self.a1 = 2 * beta
        self.a2 = -4 * p * kappa
        self.a3 = 2 * p * self.R1
        self.a4 = -4 * p ** 2 * self.R0
        c2 = self.a2 + self.a1 ** 2 / 4
        q1 = self.a4 + self.a1 * self.a3 / 2
        q0 = self.a3 ** 2 / 4
        self.c2 = c2
        self.curve = WeierstrassCurve(q1 - c2 ** 2 / 3,
                                      q0 - c2 * q1 / 3 + 2 * c2 ** 3 / 27)

    # -- model shuttling between the long and short Weierstrass equations

    def _long_to_short(self, x, y) -> Point:
        return Point(x + self.c2 / 3, y + (self.a1 * x + self.a3) / 2)

    def _short_to_long(self, P: Point) -> tuple[Fraction, Fraction]:
        x = P.x - self.c2 / 3
        return x, P.y - (self.a1 * x + self.a3) / 2

    def involution_image(self) -> Point:
        """forward of the involuted base point; the hyperelliptic involution
        acts on the curve as P |-> involution_image() - P."""
        return self._long_to_short(Fraction(0), -2 * self.p * self.R1)

    def forward(self, P: TorsorPoint) -> CurvePoint:
        _require_on_torsor(self.torsor, P)
        if P.t == self.base.t:
            if P.s == self.base.s:
                return INFINITY
            return self.involution_image()
        w = 1 / (P.t - self.base.t)
        S = Fraction(self.torsor.C) * P.s * w ** 2
        rho = S + self.p * w ** 2 + self.beta * w + self.kappa
        out = self._long_to_short(2 * self.p * rho, 4 * self.p ** 2 * rho * w)
        assert on_curve(self.curve, out)
        return out

    def backward(self, P: CurvePoint) -> TorsorPoint:
        if P is INFINITY:
            return self.base
        if not on_curve(self.curve, P):
            raise ValueError(f"{P!r} is not on {self.curve!r}")
        xl, yl = self._short_to_long(P)
        if xl == 0 and yl == -2 * self.p * self.R1:
            return hyperelliptic_involution(self.base)
        if xl == 0 and yl == 0:
            # the second point over rho = 0 (only distinct from the involuted
            # base when R1 != 0); it is rational with w = -R0/R1
            w = -self.R0 / self.R1
            if w == 0:
                raise TransportError("image lies over t = infinity")
        elif yl == 0:
            raise TransportError("image lies over t = infinity")
        else:
            w = yl / (2 * self.p * xl)
        rho = xl / (2 * self.p)
        S = rho - (self.p * w ** 2 + self.beta * w + self.kappa)
        out = TorsorPoint(self.base.t + 1 / w, S / (Fraction(self.torsor.C) * w ** 2))
        _require_on_torsor(self.torsor, out)
        return out

    # -- transported group structure (origin = base point)

    def transported_add(self, P: TorsorPoint, Q: TorsorPoint) -> TorsorPoint:
        return self.backward(add(self.curve, self.forward(P), self.forward(Q)))

    def transported_neg(self, P: TorsorPoint) -> TorsorPoint:
        return self.backward(negate(self.forward(P)))

    def transported_mul(self, n: int, P: TorsorPoint) -> TorsorPoint:
        return self.backward(scalar_mul(self.curve, n, self.forward(P)))


def to_weierstrass_with_point(
    torsor: QuarticTorsor, base: TorsorPoint
) -> tuple[WeierstrassCurve, BirationalIdentification]:
    """Identify a pointed torsor with a Weierstrass curve; forward(base) is
    Infinity and backward inverts forward away from the exceptional set."""
    maps = BirationalIdentification(torsor, base)
    return maps.curve, maps


def transported_add(
    torsor: QuarticTorsor, base: TorsorPoint, P: TorsorPoint, Q: TorsorPoint
) -> TorsorPoint:
    """backward(forward(P) + forward(Q)) for the identification based at `base`.

    Raises TransportError when the sum lands in the exceptional set.
    """
    return BirationalIdentification(torsor, base).transported_add(P, Q)
