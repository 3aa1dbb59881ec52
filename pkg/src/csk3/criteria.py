"""Arithmetic criteria for the quartic torsors and congruent-number twists:
local solubility (closed-form tests plus a brute p-adic oracle), root
numbers, the Selmer upper bound, the rank-equality condition on twists by
2C, expected-positive-rank families, the 2-isogeny, and the fiber prime
congruence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .elliptic import (
    INFINITY,
    CurvePoint,
    ExternalFact,
    Point,
    RankPositivityCertificate,
    WeierstrassCurve,
    on_curve,
)
from .facts import ExternalRankFact
from .numtheory import factorize, is_prime, is_squarefree, is_fourth_power_mod_p
from .quartic import QuarticTorsor

DEFAULT_SOLUBILITY_PRECISION = 12
_MAX_ENUMERATION = 4_000_000

REAL_PLACE = "real"


class PrecisionExhausted(ArithmeticError):
    """The p-adic enumeration hit its precision budget without a verdict."""


@dataclass(frozen=True)
class SolubilityVerdict:
    kind: str           # "soluble" | "insoluble" | "guaranteed-soluble" | "unknown"
    criterion_tag: str  # which closed-form test fired

    @property
    def is_definitely_soluble(self) -> bool:
        return self.kind in ("soluble", "guaranteed-soluble")


def _odd_prime_factors(n: int) -> list[int]:
    return [p for p, _ in factorize(abs(n)).prime_powers if p != 2]


def solubility_a1(C: int) -> SolubilityVerdict:
    """Everywhere-local solubility of C s^2 = 1 + t^4: an if-and-only-if test.

    Soluble exactly when every odd prime factor of C is 1 mod 8.
    """
    if C < 1 or not is_squarefree(C):
        raise ValueError(f"C must be squarefree and positive, got {C}")
    if all(p % 8 == 1 for p in _odd_prime_factors(C)):
        return SolubilityVerdict("soluble", "odd-primes-1-mod-8")
    return SolubilityVerdict("insoluble", "odd-primes-1-mod-8")


def solubility_a2(C: int) -> SolubilityVerdict:
    """Sufficient test for everywhere-local solubility of C s^2 = 1 + 4 t^4.

    Guaranteed when C = 5 mod 8 and -4 is a fourth power mod every p | C;
    anything else is reported as unknown, never as insoluble.
    """
    if C < 1 or not is_squarefree(C):
        raise ValueError(f"C must be squarefree and positive, got {C}")
    if C % 8 == 5 and all(is_fourth_power_mod_p(-4, p) for p in _odd_prime_factors(C)):
        return SolubilityVerdict("guaranteed-soluble", "5-mod-8-quartic-residue")
    return SolubilityVerdict("unknown", "5-mod-8-quartic-residue")


# ---------------------------------------------------------------------------
# brute p-adic / real oracle


def _sturm_chain(poly: list[Fraction]) -> list[list[Fraction]]:
    def deriv(p):
        return [c * i for i, c in enumerate(p)][1:] or [Fraction(0)]

    def trim(p):
        while p and p[-1] == 0:
            p = p[:-1]
        return p

    def poly_mod(num, den):
        num = num[:]
        while len(num) >= len(den) and any(num):
            factor = num[-1] / den[-1]
            shift = len(num) - len(den)
            for i, c in enumerate(den):
                num[shift + i] -= factor * c
            num = trim(num)
            if not num:
                break
        return num

    chain = [trim(poly), trim(deriv(poly))]
    while chain[-1]:
        rem = poly_mod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return [p for p in chain if p]


def _count_real_roots(poly: list[Fraction]) -> int:
    """Distinct real roots of a squarefree polynomial via a Sturm chain."""
    chain = _sturm_chain(poly)

    def sign_at_inf(p, positive: bool) -> int:
        lead = p[-1]
        if not positive and (len(p) - 1) % 2 == 1:
            lead = -lead
        return (lead > 0) - (lead < 0)

    def variations(positive: bool) -> int:
        signs = [sign_at_inf(p, positive) for p in chain]
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    return variations(False) - variations(True)


def _real_solubility(torsor: QuarticTorsor) -> bool:
    a, c, d, e = torsor.coefficients
    if (torsor.C > 0) == (a > 0):
        return True  # G attains the sign of C near t = +-infinity
    return _count_real_roots([e, d, c, Fraction(0), a]) > 0


def _vp(n: int, p: int, cap: int) -> int:
    if n % (p ** cap) == 0:
        return cap
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _chart_status(C: int, coeffs: list[int], p: int, k: int) -> tuple[bool, bool]:
    """(certified, any_solutions) for C s^2 = q(t) mod p^k, q given low-to-high.

    Certified means a solution passed the multivariate lifting criterion
    2 * min(v(dF/dt), v(dF/ds)) < k, which guarantees a Z_p solution.
    """
    mod = p ** k
    if mod * 2 > _MAX_ENUMERATION:
        raise PrecisionExhausted(f"enumeration modulo {p}^{k} is too large")
    reachable = {}
    for s in range(mod):
        v = (C * s * s) % mod
        if v not in reachable:
            reachable[v] = s
    dcoeffs = [i * c for i, c in enumerate(coeffs)][1:]

    def horner(poly, t):
        acc = 0
        for c in reversed(poly):
            acc = (acc * t + c) % mod
        return acc

    any_solutions = False
    for t in range(mod):
        g = horner(coeffs, t)
        if g not in reachable:
            continue
        any_solutions = True
        s = reachable[g]
        dt = horner(dcoeffs, t)
        ds = (2 * C * s) % mod
        mu = min(_vp(dt, p, k), _vp(ds, p, k))
        if 2 * mu < k:
            return True, True
    return False, any_solutions


def brute_local_solubility(
    torsor: QuarticTorsor, place, precision: int = DEFAULT_SOLUBILITY_PRECISION
) -> bool:
    """Exhaustive solubility of C s^2 = G(t) over Q_p (or R for place="real").

    Enumerates both affine charts modulo p^k for k = 1, 2, ...: a verdict of
    True requires a lifting-certified solution, False requires that no chart
    solution exists modulo p^k at all.  Raises PrecisionExhausted when the
    precision budget runs out undecided.  Needs integral quartic coefficients.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    if place == REAL_PLACE:
        return _real_solubility(torsor)
    p = place
    if not is_prime(p):
        raise ValueError(f"place must be a prime or 'real', got {place!r}")
    a, c, d, e = torsor.coefficients
    if any(v.denominator != 1 for v in (a, c, d, e)):
        raise ValueError("brute local solubility needs integral quartic coefficients")
    chart_t = [int(e), int(d), int(c), 0, int(a)]   # G(t)
    chart_w = [int(a), 0, int(c), int(d), int(e)]   # w^4 G(1/w), covers |t| > 1
    for k in range(1, precision + 1):
        solutions_somewhere = False
        for coeffs in (chart_t, chart_w):
            certified, any_solutions = _chart_status(torsor.C, coeffs, p, k)
            if certified:
                return True
            solutions_somewhere = solutions_somewhere or any_solutions
        if not solutions_somewhere:
            return False
    raise PrecisionExhausted(
        f"no verdict for {torsor!r} at p = {p} within precision {precision}")


# ---------------------------------------------------------------------------
# root numbers and Selmer bookkeeping


def root_number(D: int) -> int:
    """Sign of the functional equation for the twist D y^2 = x^3 - x,
    squarefree D > 0, from the Birch-Stephens residue table:
    +1 for D = 1, 2, 3 mod 8 and -1 for D = 5, 6, 7 mod 8."""
    if D < 1:
        raise ValueError(f"root number table covers positive twists only, got {D}")
    if not is_squarefree(D):
        raise ValueError(f"{D} is not squarefree")
    residue = D % 8
    assert residue not in (0, 4)  # impossible for squarefree D
    return 1 if residue in (1, 2, 3) else -1


def selmer_upper_bound(n: int) -> int:
    """Monsky's bound 2*Omega(n) + 2 on dim_F2 Sel^2 of the twist by
    squarefree n >= 1, with Omega counting distinct odd prime divisors."""
    if n < 1 or not is_squarefree(n):
        raise ValueError(f"need squarefree n >= 1, got {n}")
    return 2 * factorize(n).omega_odd() + 2


@dataclass(frozen=True)
class SelmerLedger:
    """Bookkeeping for one twist: the Monsky bound against known rank data.

    The hard invariant rank_lower_bound + 2 <= upper_bound is checked at
    construction; a violation means a false certificate somewhere.
    """

    C: int
    omega: int
    upper_bound: int
    rank_lower_bound: int
    external_rank: int | None = None

    def __post_init__(self):
        if self.rank_lower_bound + 2 > self.upper_bound:
            raise ValueError(
                f"Selmer ledger violation for twist {self.C}: "
                f"rank >= {self.rank_lower_bound} against bound {self.upper_bound}")
        if self.external_rank is not None and self.external_rank + 2 > self.upper_bound:
            raise ValueError(
                f"external rank {self.external_rank} for twist {self.C} "
                f"violates the Selmer bound {self.upper_bound}")


def selmer_ledger_for_twist(
    D: int, rank_lower_bound: int, external_rank: int | None = None
) -> SelmerLedger:
    omega = factorize(D).omega_odd()
    return SelmerLedger(D, omega, 2 * omega + 2, rank_lower_bound, external_rank)


@dataclass(frozen=True)
class StarStarVerdict:
    """Outcome of the rank-equality condition 2*Omega(C) = rank of the twist
    by 2C, which (together with local solubility) squeezes Sha[2] to zero and
    trivializes the torsor C s^2 = 1 + t^4."""

    kind: str  # "holds" | "fails" | "inconclusive"
    C: int
    omega: int
    target_rank: int
    known_rank: int | None      # exact rank if external, else None
    rank_lower_bound: int
    used_external: bool
    conclusion: str


def star_star_verdict(C: int, rank_info=None) -> StarStarVerdict:
    """Evaluate 2*Omega(C) = rank for the twist by 2C.

    rank_info may be a RankPositivityCertificate (search witnesses give the
    lower bound 1), an ExternalRankFact (an exact flagged claim), or None.
    A search lower bound can only reach "holds" by meeting the target, in
    which case the Selmer bound forces equality.
    """
    if C < 1 or not is_squarefree(C):
        raise ValueError(f"C must be squarefree and positive, got {C}")
    omega = factorize(C).omega_odd()
    target = 2 * omega
    if solubility_a1(C).kind == "insoluble":
        return StarStarVerdict("fails", C, omega, target, None, 0, False,
                               "local solubility criterion fails")

    known_rank = None
    lower = 0
    used_external = False
    if isinstance(rank_info, ExternalRankFact):
        known_rank, lower, used_external = rank_info.rank, rank_info.rank, True
    elif isinstance(rank_info, RankPositivityCertificate):
        lower = rank_info.rank_lower_bound()
        used_external = rank_info.is_external()
        if isinstance(rank_info.provenance, ExternalFact):
            known_rank = rank_info.provenance.claimed_rank
    elif rank_info is not None:
        raise TypeError(f"unsupported rank_info {type(rank_info).__name__}")

    if known_rank is not None:
        if known_rank == target:
            kind = "holds"
        else:
            kind = "fails"
    elif lower >= target:
        kind = "holds"  # Selmer bound squeezes rank down to the target
    else:
        kind = "inconclusive"

    if kind == "holds":
        conclusion = "Sha[2] = 0; torsor is trivial (has rational points)"
        if target > 0:
            conclusion += "; infinitely many rational points"
    elif kind == "fails":
        conclusion = "rank equality fails"
    else:
        conclusion = f"rank lower bound {lower} below target {target}"
    return StarStarVerdict(kind, C, omega, target, known_rank, lower,
                           used_external, conclusion)


@dataclass(frozen=True)
class ExpectedRank:
    expected: bool
    family: str | None = None
    citation: str | None = None


def expected_rank_family(D: int) -> ExpectedRank:
    """Unconditionally positive-rank families for the twist D y^2 = x^3 - x:
    primes 5 or 7 mod 8, and products pq / 2pq with p = 5 mod 8 and
    q = 3 or 7 mod 8 (both prime)."""
    if D < 1 or not is_squarefree(D):
        raise ValueError(f"D must be squarefree and positive, got {D}")
    if is_prime(D) and D % 8 in (5, 7):
        return ExpectedRank(True, "prime-5-or-7-mod-8", "heegner-monsky")
    odd = _odd_prime_factors(D)
    if len(odd) == 2 and D in (odd[0] * odd[1], 2 * odd[0] * odd[1]):
        p5 = [p for p in odd if p % 8 == 5]
        q37 = [q for q in odd if q % 8 in (3, 7)]
        if len(p5) == 1 and len(q37) == 1:
            return ExpectedRank(True, "pq-or-2pq", "monsky-descent")
    return ExpectedRank(False)


# ---------------------------------------------------------------------------
# the 2-isogeny


def two_isogeny_image_curve(D: int) -> WeierstrassCurve:
    return WeierstrassCurve(4 * D * D, 0)


def two_isogeny_image(D: int, P: CurvePoint) -> CurvePoint:
    """Degree-2 isogeny with kernel {O, (0,0)} from y^2 = x^3 - D^2 x to
    y^2 = x^3 + 4 D^2 x:  (x, y) |-> (y^2/x^2, y (x^2 + D^2)/x^2)."""
    source = WeierstrassCurve(-D * D, 0)
    if not on_curve(source, P):
        raise ValueError(f"{P!r} is not on {source!r}")
    if P is INFINITY:
        return INFINITY
    if P.x == 0:  # the kernel
        return INFINITY
    X = (P.y / P.x) ** 2
    Y = P.y * (P.x ** 2 + D * D) / P.x ** 2
    image = Point(X, Y)
    assert on_curve(two_isogeny_image_curve(D), image)
    return image


def fiber_prime_check(l: int, m: int) -> bool:
    """Every odd prime factor of l^4 + m^4 is 1 mod 8 for coprime (l, m).

    True is the theorem; a False return means a factorization bug.
    """
    if (l, m) == (0, 0):
        raise ValueError("(0, 0) is not a valid pair")
    if gcd(l, m) != 1:
        raise ValueError(f"({l}, {m}) are not coprime")
    n = l ** 4 + m ** 4
    return all(p % 8 == 1 for p in _odd_prime_factors(n))
