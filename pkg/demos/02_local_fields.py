"""Towers of 2-adic and 3-adic fields: extensions, roots, automorphisms.

Fields are built from an unramified base by Eisenstein steps; extend()
normalizes an arbitrary monic integral polynomial into that shape and
certifies the ramification data (e, f).
"""

from wildrep.padic import (
    automorphisms,
    contains_sqrt,
    extend,
    identity_hom,
    is_square,
    make_unramified,
    roots_in,
    valuation,
)

Q2 = make_unramified(2, 1, 60)
Q3 = make_unramified(3, 1, 60)

print("== extensions and their (e, f) ==")
for F, poly, label in [
    (Q3, [-6, 9, -3, 1], "x^3 - 3x^2 + 9x - 6 over Q3 (Eisenstein)"),
    (Q3, [-9, 0, 0, 1], "x^3 - 9 over Q3 (slope 2/3)"),
    (Q2, [-5, 0, 1], "x^2 - 5 over Q2 (unramified in disguise)"),
    (Q2, [1, 0, 1], "x^2 + 1 over Q2 (ramified unit quadratic)"),
]:
    res = extend(F, [F.from_int(c) for c in poly])
    print(f"  {label}: e = {res.e_rel}, f = {res.f_rel}, v(root) = {valuation(res.root) if res.e_rel > 1 else 0}")

print()
print("== squares ==")
print("  7 a square in Q3:", is_square(Q3, Q3.from_int(7))[0])
print("  5 a square in Q2:", is_square(Q2, Q2.from_int(5))[0])
print("  17 a square in Q2:", is_square(Q2, Q2.from_int(17))[0])
res2 = extend(Q2, [Q2.from_int(-2), Q2.zero(), Q2.one()])
print("  2 a square in Q2(sqrt2):", contains_sqrt(res2.field, res2.field.from_int(2)))

print()
print("== a Galois cubic and its automorphisms ==")
res = extend(Q3, [Q3.from_int(1), Q3.from_int(6), Q3.zero(), Q3.one()])  # x^3+6x+1
F = res.field
rts = roots_in(F, [F.from_int(1), F.from_int(6), F.zero(), F.one()])
print(f"  x^3 + 6x + 1 splits in its own field: {len(rts)} roots (disc is a square)")
autos, inertia, frob = automorphisms(F, Q3)
print(f"  automorphisms: {len(autos)}, all inertial: {len(inertia) == len(autos)}")
print(f"  canonical Frobenius representative fixes the field: {frob.eq(identity_hom(F))}")
print("  orders:", sorted(h.order() for h in autos))
