"""Exact arithmetic in the ring Z[zeta] where zeta is a primitive 24th root of unity.

Z[zeta] has rank 8 over Z with power basis 1, zeta, ..., zeta^7 and relation
zeta^8 = zeta^4 - 1.  It contains every constant needed by the representation
formulas: i, sqrt(2), sqrt(-2), sqrt(3), sqrt(-3), the cube roots of unity and
the eighth roots of unity.  All operations are exact over arbitrary-precision
integers; the complex embedding is for display and approximate cross-checks
only, never for decisions.
"""

import cmath

DEGREE = 8

# zeta^8 = zeta^4 - 1  (24th cyclotomic polynomial x^8 - x^4 + 1)


def _reduce(coeffs):
    """Reduce a coefficient list (any length) modulo x^8 - x^4 + 1."""
    c = list(coeffs)
    for k in range(len(c) - 1, DEGREE - 1, -1):
        v = c[k]
        if v:
            c[k - 4] += v
            c[k - 8] -= v
        c.pop()
    while len(c) < DEGREE:
        c.append(0)
    return tuple(c)


class CycInt:
    """An element of Z[zeta24], stored as 8 integer coefficients (constant first)."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        self.c = _reduce(coeffs)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return CycInt([a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return CycInt([a - b for a, b in zip(self.c, other.c)])

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return CycInt([-a for a in self.c])

    def __mul__(self, other):
        other = _coerce(other)
        prod = [0] * (2 * DEGREE - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    if b:
                        prod[i + j] += a * b
        return CycInt(prod)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not defined in Z[zeta24]")
        acc = ONE
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, (CycInt, int)):
            return self.c == _coerce(other).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def conj(self):
        """Complex conjugation, zeta |-> zeta^-1 (a ring automorphism)."""
        out = ZERO
        for k, a in enumerate(self.c):
            if a:
                out = out + a * _CONJ_BASIS[k]
        return out

    def divide_exact(self, m):
        """Divide by a nonzero integer, raising if any coefficient is not divisible."""
        if any(a % m for a in self.c):
            raise ValueError(f"{self!r} is not divisible by {m} in Z[zeta24]")
        return CycInt([a // m for a in self.c])

    # -- conversions ---------------------------------------------------------

    def is_rational(self):
        return not any(self.c[1:])

    def as_int(self):
        if not self.is_rational():
            raise ValueError(f"{self!r} is not a rational integer")
        return self.c[0]

    def coeff_vector(self):
        """Serialization: the 8 coefficients, constant term first."""
        return list(self.c)

    def embed(self):
        """Approximate complex value at zeta = exp(2*pi*i/24)."""
        z = cmath.exp(2j * cmath.pi / 24)
        val = 0j
        for a in reversed(self.c):
            val = val * z + a
        return val

    def __repr__(self):
        if self.is_rational():
            return f"CycInt({self.c[0]})"
        return f"CycInt({list(self.c)})"

    def __str__(self):
        terms = []
        for k, a in enumerate(self.c):
            if not a:
                continue
            if k == 0:
                terms.append(str(a))
            else:
                mon = "z" if k == 1 else f"z^{k}"
                if a == 1:
                    terms.append(mon)
                elif a == -1:
                    terms.append(f"-{mon}")
                else:
                    terms.append(f"{a}*{mon}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" + {t}" if not t.startswith("-") else f" - {t[1:]}"
        return out


def _coerce(x):
    if isinstance(x, CycInt):
        return x
    if isinstance(x, int):
        return CycInt((x,))
    raise TypeError(f"cannot coerce {type(x).__name__} into Z[zeta24]")


def zeta_pow(k):
    """zeta24^k as a CycInt, for any integer k."""
    k %= 24
    coeffs = [0] * (k + 1)
    coeffs[k] = 1
    return CycInt(coeffs)


ZERO = CycInt((0,))
ONE = CycInt((1,))

_CONJ_BASIS = [zeta_pow(-k) for k in range(DEGREE)]


class RootOfUnity:
    """zeta24^exponent as a formal root of unity (multiplication adds exponents)."""

    __slots__ = ("exponent",)

    def __init__(self, exponent):
        self.exponent = exponent % 24

    def __mul__(self, other):
        return RootOfUnity(self.exponent + other.exponent)

    def __pow__(self, n):
        return RootOfUnity(self.exponent * n)

    def inverse(self):
        return RootOfUnity(-self.exponent)

    def order(self):
        return 24 // _gcd(self.exponent, 24)

    def to_cyc(self):
        return zeta_pow(self.exponent)

    def __eq__(self, other):
        return isinstance(other, RootOfUnity) and self.exponent == other.exponent

    def __hash__(self):
        return hash(("zeta24", self.exponent))

    def __repr__(self):
        return f"RootOfUnity(zeta24^{self.exponent})"


def _gcd(a, b):
    a = abs(a)
    while b:
        a, b = b, a % b
    return a


# -- named constants ----------------------------------------------------------

I = zeta_pow(6)
SQRT2 = zeta_pow(3) + zeta_pow(-3)
SQRT3 = zeta_pow(2) + zeta_pow(-2)
SQRTM2 = I * SQRT2
SQRTM3 = I * SQRT3
ZETA3 = zeta_pow(8)
ZETA8 = zeta_pow(3)


def constants():
    """The named values used throughout the representation formulas."""
    return {
        "i": I,
        "sqrt2": SQRT2,
        "sqrtm2": SQRTM2,
        "sqrt3": SQRT3,
        "sqrtm3": SQRTM3,
        "zeta3": ZETA3,
        "zeta8": ZETA8,
    }


def embed_complex(a):
    """Approximate complex embedding of a CycInt (display / cross-checks only)."""
    return _coerce(a).embed()


# -- reduction at the fixed prime above 3 --------------------------------------
#
# 3 ramifies in Z[zeta24]: x^8 - x^4 + 1 = (x^4 + 1)^2 mod 3 and
# x^4 + 1 = (x^2 + x + 2)(x^2 + 2x + 2) over the field with 3 elements.
# We fix the prime (3, g(zeta)) with g = x^2 + x + 2 and reduce into
# F9 = F3[u]/(u^2 + u + 2), sending zeta24 to the class u of x.


class F9Elem:
    """An element a + b*u of the field with 9 elements, u^2 = 2u + 1."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = a % 3
        self.b = b % 3

    def __add__(self, other):
        other = _f9(other)
        return F9Elem(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _f9(other)
        return F9Elem(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return _f9(other) - self

    def __neg__(self):
        return F9Elem(-self.a, -self.b)

    def __mul__(self, other):
        other = _f9(other)
        # (a + bu)(c + du) = ac + (ad + bc)u + bd*u^2,  u^2 = 2u + 1
        a, b, c, d = self.a, self.b, other.a, other.b
        return F9Elem(a * c + b * d, a * d + b * c + 2 * b * d)

    __rmul__ = __mul__

    def __pow__(self, n):
        n %= 8
        acc = F9Elem(1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other):
        try:
            other = _f9(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def order(self):
        """Multiplicative order (the group is cyclic of order 8)."""
        if not self:
            raise ZeroDivisionError("0 has no multiplicative order")
        x = self
        for k in range(1, 9):
            if x == F9Elem(1):
                return k
            x = x * self
        raise AssertionError("unreachable")

    def __repr__(self):
        if self.b == 0:
            return f"F9({self.a})"
        return f"F9({self.a} + {self.b}u)"


def _f9(x):
    if isinstance(x, F9Elem):
        return x
    if isinstance(x, int):
        return F9Elem(x)
    raise TypeError(f"cannot coerce {type(x).__name__} into F9")


_U = F9Elem(0, 1)
_U_POWERS = [F9Elem(1)]
for _k in range(1, DEGREE):
    _U_POWERS.append(_U_POWERS[-1] * _U)


def reduce_mod3(x):
    """Ring morphism Z[zeta24] -> F9 at the fixed prime above 3 (zeta24 |-> u)."""
    x = _coerce(x)
    out = F9Elem(0)
    for k, a in enumerate(x.c):
        if a % 3:
            out = out + (a % 3) * _U_POWERS[k]
    return out
