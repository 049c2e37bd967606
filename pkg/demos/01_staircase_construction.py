"""
Building a staircase Reinhardt domain and its certificate table
===============================================================

The construction fixes an annulus 1/a < |z| < a, a ladder of radii
1 < a_1 < a_2 < ... < a, and hangs a log-linear "staircase" profile over it:
|w| < 1 on the middle band, then monomial decay |w| ~ |z|^{-n_k} with
rapidly growing integer exponents.  Each level k comes with a certified
squeezing-function upper bound at the circle |z| = a_k.
"""

import math

from squeeze import ConstructionParams, build

############################################################
# The default schedule: a = 2, radii 2 - 2^-k, targets 1/k

params = ConstructionParams(a="2", levels=3)
domain, cert = build(params)

print("certificate table (k, a_k, C_k, m_k, n_k, s_upper, target):")
for rec in cert.levels:
    print(f"  {rec.k}  {rec.a_k:<7} {str(rec.c_k):>3} {rec.m_k:>6} "
          f"{rec.n_k:>6}  {rec.s_upper.value:.6f}  < 1/{rec.k}")

############################################################
# The exponents are exact integers, reproducible bit for bit;
# the upper bounds are C_k * sqrt(2/m_k), strictly below 1/k.

for rec in cert.levels:
    want = float(rec.c_k) * math.sqrt(2.0 / rec.m_k)
    assert math.isclose(rec.s_upper.value, want, rel_tol=1e-14)

############################################################
# A certified squeezing lower bound at the center point (1, 0)
# comes from squeezing the domain between two Euclidean balls.

print(f"\ncertified S lower bound at (1,0): {cert.s_lower.value:.6f}")
print(f"violation verdict at this truncation: {cert.violation}")
print("(the harmonic 1/k schedule needs 1/k below the center bound;")
print(" see demo 02 for the margin schedule that forces it at level 2)")

############################################################
# The profile in log coordinates: heights at the breakpoints.

print("\nprofile breakpoints (t, phi):")
for t, v in zip(domain.profile.breakpoints, domain.profile.values):
    print(f"  {t:+.6f}  {v:+.3f}")
