"""Exact integer and rational utilities: trial-division factorization,
squarefree classes, residue symbols, congruence classifiers.

Everything here is deterministic and exact.  Factorization is plain trial
division with a hard budget; the twist parameters this library works with
are small, so nothing fancier is warranted and every factorization stays
auditable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

DEFAULT_FACTOR_BOUND = 2 ** 63


class FactorizationBudgetError(ValueError):
    """Raised when an input exceeds the configured trial-division budget."""


def _as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    raise TypeError(f"expected an int or Fraction, got {type(q).__name__}")


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization: sign * prod(p^e) over strictly increasing p."""

    sign: int
    prime_powers: tuple[tuple[int, int], ...]

    def value(self) -> int:
        n = self.sign
        for p, e in self.prime_powers:
            n *= p ** e
        return n

    def omega_odd(self) -> int:
        """Number of distinct odd prime divisors."""
        return sum(1 for p, _ in self.prime_powers if p != 2)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.prime_powers)

    def squarefree_kernel(self) -> int:
        k = self.sign
        for p, e in self.prime_powers:
            if e % 2:
                k *= p
        return k


def factorize(n: int, bound: int = DEFAULT_FACTOR_BOUND) -> Factorization:
    """Factor a nonzero integer by trial division.

    Raises FactorizationBudgetError when |n| exceeds `bound`.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    if abs(n) > bound:
        raise FactorizationBudgetError(
            f"factorization budget exceeded: |{n}| > {bound}")
    sign = -1 if n < 0 else 1
    m = abs(n)
    powers = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            powers.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        powers.append((m, 1))
    return Factorization(sign, tuple(powers))


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return factorize(n).is_squarefree()


@dataclass(frozen=True)
class SquarefreeClass:
    """A class in Q*/Q*^2, held as its signed squarefree representative."""

    representative: int

    def __post_init__(self):
        if self.representative == 0:
            raise ValueError("zero has no squarefree class")
        if not factorize(self.representative).is_squarefree():
            raise ValueError(f"{self.representative} is not squarefree")

    def __mul__(self, other: "SquarefreeClass") -> "SquarefreeClass":
        a, b = self.representative, other.representative
        g = gcd(abs(a), abs(b))
        return SquarefreeClass((a // g) * (b // g))

    def __repr__(self):
        return f"[{self.representative}]"


def squarefree_class(q, bound: int = DEFAULT_FACTOR_BOUND) -> SquarefreeClass:
    """Squarefree class of a nonzero rational: the signed squarefree kernel
    of numerator * denominator."""
    q = _as_fraction(q)
    if q == 0:
        raise ValueError("zero has no squarefree class")
    kernel = factorize(q.numerator * q.denominator, bound).squarefree_kernel()
    return SquarefreeClass(kernel)


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def rational_square_root(q) -> Fraction | None:
    """Exact square root of a rational, or None if q is not a square.

    Never factors anything, so it works on arbitrarily large inputs.
    """
    q = _as_fraction(q)
    if q < 0:
        return None
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def same_square_class(q, r) -> bool:
    """Whether two nonzero rationals lie in the same class of Q*/Q*^2.

    Factorization-free (tests whether q/r is a rational square), hence safe
    for the huge values produced by repeated group-law doubling.
    """
    q, r = _as_fraction(q), _as_fraction(r)
    if q == 0 or r == 0:
        raise ValueError("zero has no squarefree class")
    return rational_square_root(q / r) is not None


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd positive n; the Legendre symbol when n is prime."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd positive n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fourth_power_mod_p(a: int, p: int) -> bool:
    """Whether a is congruent to a fourth power modulo an odd prime p."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return True
    # a is a 4th power iff a^((p-1)/g) = 1 with g = gcd(4, p-1)
    g = gcd(4, p - 1)
    return pow(a, (p - 1) // g, p) == 1
