"""Program-size complexity and compression-rate profiles.

Two literal-style machines encode every string directly; their cost
functions differ by at most a small additive gap, the desk-scale face of
machine invariance.  Profiles track H(alpha_n)/n along the binary
expansion of a number, including one produced by the thermodynamic
evaluator itself.
"""

from fractions import Fraction

from thermoait import (
    Dyadic, build_table, builtin_snapshot, eval_limit, invariance_gap,
    profile,
)

lit = build_table(builtin_snapshot("literal", 21))
gam = build_table(builtin_snapshot("gamma_literal", 17))
print(f"literal machine (1^n 0 x -> x): H(x) = 2|x| + 1, "
      f"{len(lit.entries)} outputs, {lit.exactness}")
print(f"gamma machine (gamma(|x|) x -> x): H(x) = |x| + 2 floor(log2|x|) + 1,"
      f" {len(gam.entries)} outputs, {gam.exactness}")

gap = invariance_gap(lit, gam)
print(f"invariance gap over {gap.shared_outputs} shared outputs: "
      f"|H_lit - H_gam| <= {gap.max_abs} "
      f"(signed: +{gap.max_a_minus_b}/-{gap.max_b_minus_a})")
print()

print("profile of alpha = 5/8 = 0.101000... on the gamma machine:")
for e in profile(Dyadic(5, -3), 6, gam):
    print(f"  n={e.n}  bits={e.bits.bits:<6}  H={e.H:>2}  ratio={e.ratio}")
print()

print("profile of Z(1/2) = 1/3 = 0.010101... on the literal machine:")
z = eval_limit(builtin_snapshot("geometric", 120), Fraction(1, 2)).Z
for e in profile(z, 8, lit):
    print(f"  n={e.n}  bits={e.bits.bits:<8}  H={e.H:>2}  ratio={e.ratio}")
print()
print("the literal ratios fall toward 2 from above: a machine that cannot")
print("compress pays two program bits per output bit, whatever the input.")
