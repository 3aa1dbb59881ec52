"""Local solubility of the quartics C s^2 = 1 + t^4 and C s^2 = 1 + 4 t^4.

For the first family the closed-form criterion (every odd prime factor of C
congruent to 1 mod 8) is an exact characterization of everywhere-local
solubility; the brute p-adic oracle confirms it place by place.  For the
second family the residue criterion (C = 5 mod 8 with -4 a fourth power mod
every factor) is sufficient only.
"""

from csk3 import brute_local_solubility, solubility_a1, solubility_a2
from csk3.numtheory import factorize, is_squarefree
from csk3.quartic import QuarticTorsor

print("C s^2 = 1 + t^4, squarefree C up to 60")
print(f"{'C':>3} {'criterion':<10} {'brute oracle at p | 2C and the real place'}")
print("-" * 64)
for C in range(1, 61):
    if not is_squarefree(C):
        continue
    verdict = solubility_a1(C)
    torsor = QuarticTorsor.fermat(1, C)
    places = [2] + [p for p, _ in factorize(C).prime_powers if p != 2] + ["real"]
    brute = {place: brute_local_solubility(torsor, place) for place in places}
    agree = (verdict.kind == "soluble") == all(brute.values())
    marks = " ".join(f"{p}:{'+' if ok else '-'}" for p, ok in brute.items())
    print(f"{C:>3} {verdict.kind:<10} {marks}   {'ok' if agree else 'MISMATCH'}")

print()
print("C s^2 = 1 + 4 t^4: guaranteed-soluble cases among primes = 5 mod 8")
for C in (5, 13, 29, 37, 53, 61):
    print(f"  C = {C}: {solubility_a2(C).kind}")
