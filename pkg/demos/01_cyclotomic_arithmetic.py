"""Exact arithmetic in Z[zeta24]: the value ring of the representations.

Every number appearing in the representation formulas (i, sqrt2, sqrt(-2),
sqrt(-3), cube and eighth roots of unity) lives in the degree-8 ring
Z[zeta24].  All arithmetic is exact; the complex embedding is display-only.
"""

from wildrep.cyc24 import (
    CycInt,
    I,
    SQRT2,
    SQRT3,
    SQRTM2,
    SQRTM3,
    ZETA3,
    ZETA8,
    constants,
    embed_complex,
    reduce_mod3,
    zeta_pow,
)

print("== the named constants and their defining relations ==")
for name, val in constants().items():
    print(f"  {name:7s} = {val}   (vector {val.coeff_vector()})")

print()
print("sqrt2^2  =", SQRT2 ** 2)
print("sqrtm3^2 =", SQRTM3 ** 2)
print("i^2      =", I ** 2)
print("zeta3 + zeta3^2 =", ZETA3 + ZETA3 ** 2, " (sum of the primitive cube roots)")
print("(-1 - sqrt(-3))/2 == zeta3^2:", (CycInt(-1) - SQRTM3).divide_exact(2) == ZETA3 ** 2)
print("(-sqrt2 + sqrt(-2))/2 == zeta8^3:", (SQRTM2 - SQRT2).divide_exact(2) == ZETA8 ** 3)

print()
print("== complex embedding (approximate, never used for decisions) ==")
for name in ("sqrt2", "zeta8", "sqrtm3"):
    print(f"  {name} -> {embed_complex(constants()[name]):.6f}")

print()
print("== reduction at the fixed prime above 3 (target F9 = F3[u]/(u^2+u+2)) ==")
print("  reduce(3)  =", reduce_mod3(CycInt(3)))
print("  reduce(-2) =", reduce_mod3(CycInt(-2)))
print("  reduce(i)  =", reduce_mod3(I), " multiplicative order:", reduce_mod3(I).order())
print("  reduce(zeta24) satisfies x^2+x+2 = 0:",
      reduce_mod3(zeta_pow(1)) ** 2 + reduce_mod3(zeta_pow(1)) + 2 == reduce_mod3(CycInt(0)))
