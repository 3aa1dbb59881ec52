"""Exact rational points on the surface 3 (1 + 4 T^4) Y^2 = X^3 - X.

The pipeline: certify simultaneous positive rank for the class C = 5
(a point on 5 s^2 = 1 + 4 t^4 plus rank witnesses on the twists by 5 and
15), fan the witnesses out into an atlas of exact surface points, and
report fiber rank jumps and the spread of the T-projections.  A second
atlas over C = 13 lands in a disjoint set of points: distinct classes
never mix.
"""

from fractions import Fraction

from csk3 import atlas_generate, density_report, rank_jump_table, spr_check

outcome = spr_check(3, 2, 5)
cert = outcome.certificate
print("SPR certificate for (d, a, C) = (3, 2, 5):")
print("  torsor witness :", cert.torsor_witness)
print("  jacobian leg   :", cert.jacobian_witness.curve, "->", cert.jacobian_witness.witness)
print("  curve leg      :", cert.curve_witness.curve, "->", cert.curve_witness.witness)

atlas = atlas_generate(3, 2, 5, cert, (10, 3))
print(f"\natlas grid (10, 3): {len(atlas.points)} distinct exact points, "
      f"{atlas.skipped_exceptional} exceptional landings skipped")
for P in atlas.points[:5]:
    lhs = 3 * (1 + 4 * P.T ** 4) * P.Y ** 2
    assert lhs == P.X ** 3 - P.X
    print("  ", P)
print("   ...")

rows = rank_jump_table(atlas)
print(f"\nfibers with certified rank jump ({len(rows)} distinct T):")
for row in rows:
    print(f"  T = {row.T}: fiber class {row.fiber_class}, witness {row.witness}")

report = density_report(atlas, (Fraction(-2), Fraction(2)))
print(f"\nT-projection coverage of [-2, 2]: {report.samples} samples, "
      f"max gap {report.max_gap}")
print("both branches hit:", report.both_y_signs_present)

atlas13 = atlas_generate(3, 2, 13, spr_check(3, 2, 13).certificate, (10, 3))
pts5 = {(P.X, P.Y, P.T) for P in atlas.points}
pts13 = {(P.X, P.Y, P.T) for P in atlas13.points}
print(f"\natlas over C = 13: {len(pts13)} points; overlap with C = 5 atlas: "
      f"{len(pts5 & pts13)} (classes keep them disjoint)")
