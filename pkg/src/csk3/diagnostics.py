"""Survey reports over atlases and fibers: real-line coverage of the
T-projections, rank-jump tables for fibers above atlas points, and root
number surveys across fibers.

Coverage is reported, never asserted as a theorem: the numbers here are
evidence, and the only hard guarantees are the exact re-verification of
every witness and the monotonicity of the gap statistic under supersets.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .criteria import root_number
from .elliptic import (
    Point,
    TwistedCurve,
    normalize_twist,
    on_curve,
    torsion_test,
)
from .numtheory import SquarefreeClass, rational_square_root, squarefree_class
from .surface import Atlas, fiber_twist_class

DEFAULT_GAP_PRECISION = 30


@dataclass(frozen=True)
class DensityReport:
    interval: tuple[Fraction, Fraction]
    samples: int
    max_gap: Decimal
    both_y_signs_present: bool
    sample_source: str

    def max_gap_float(self) -> float:
        return float(self.max_gap)


def _to_decimal(q: Fraction, precision: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = precision
        return Decimal(q.numerator) / Decimal(q.denominator)


def density_report(atlas: Atlas, interval, precision: int = DEFAULT_GAP_PRECISION) -> DensityReport:
    """Gap statistics of the atlas T-projections inside a real interval.

    T-values are approximated to `precision` significant digits only for the
    gap arithmetic; everything else stays exact.  With fewer than two samples
    in the interval the whole interval length is reported as the gap (the
    degenerate-case convention; it keeps max_gap non-increasing as samples
    are added).  With two or more, the gaps to both interval endpoints count
    alongside the consecutive gaps.
    """
    lo, hi = (Fraction(v) for v in interval)
    if not (lo < hi):
        raise ValueError("interval must satisfy lo < hi")
    if not atlas.points:
        raise ValueError("empty atlas")
    ts = sorted({P.T for P in atlas.points if lo <= P.T <= hi})
    source = f"atlas(d={atlas.d}, a={atlas.a}, C={atlas.C}, grid={atlas.grid})"
    with localcontext() as ctx:
        ctx.prec = precision + 10
        dlo, dhi = _to_decimal(lo, precision), _to_decimal(hi, precision)
        if len(ts) <= 1:
            gap = dhi - dlo
        else:
            approx = [_to_decimal(t, precision) for t in ts]
            gaps = [approx[0] - dlo, dhi - approx[-1]]
            gaps.extend(b - a for a, b in zip(approx, approx[1:]))
            gap = max(gaps)
    signs = {1 if P.Y > 0 else -1 for P in atlas.points if P.Y != 0}
    return DensityReport((lo, hi), len(ts), gap, signs == {1, -1}, source)


@dataclass(frozen=True)
class RankJumpRow:
    """One fiber whose rank provably jumps above the generic rank zero:
    the witness is a non-torsion point on the twisted model of the fiber."""

    T: Fraction
    fiber_class: SquarefreeClass
    witness: Point  # on the twisted model  class * y^2 = x^3 - x


def rank_jump_table(atlas: Atlas) -> list[RankJumpRow]:
    """One row per distinct atlas T with a certified non-torsion fiber
    witness; fibers where only exceptional or torsion points show up are
    left out.

    Every atlas T satisfies 1 + a^2 T^4 = C * square, so the fiber class is
    the class of d*C throughout; the reduction of each witness to that
    twisted model is exact and factorization-free.
    """
    D0 = squarefree_class(atlas.d * atlas.C)
    curve = TwistedCurve(D0.representative)
    rows: list[RankJumpRow] = []
    for T in atlas.t_values():
        candidates = sorted(
            (P for P in atlas.points if P.T == T and not P.exceptional),
            key=lambda P: (max(abs(P.X.numerator), P.X.denominator), P.X, P.Y))
        witness = None
        for P in candidates:
            M = atlas.d * (1 + atlas.a ** 2 * T ** 4)
            r = rational_square_root(M / D0.representative)
            assert r is not None  # class coherence of the atlas
            Q = Point(P.X, P.Y * r)
            if not on_curve(curve, Q):
                continue
            normalized = normalize_twist(D0.representative, Q)
            if torsion_test(curve.normalized(), normalized).is_torsion:
                continue
            witness = Q
            break
        if witness is not None:
            rows.append(RankJumpRow(T, D0, witness))
    return rows


@dataclass(frozen=True)
class SurveyRow:
    T: Fraction
    fiber_class: SquarefreeClass
    omega: int | None  # None when the fiber class is negative (unsupported)

    @property
    def supported(self) -> bool:
        return self.omega is not None


def root_number_survey(d: int, a: int, t_values) -> list[SurveyRow]:
    """Root numbers of the fibers above the given T values, via the
    Birch-Stephens residue table applied to each fiber's twist class.
    Negative fiber classes fall outside the table and are marked unsupported.
    """
    rows = []
    for T in t_values:
        cls = fiber_twist_class(d, a, T)
        omega = root_number(cls.representative) if cls.representative > 0 else None
        rows.append(SurveyRow(Fraction(T), cls, omega))
    return rows
