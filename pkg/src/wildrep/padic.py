"""Capped-precision arithmetic in towers of finite extensions of Q2 and Q3.

A field is either an unramified base (polynomial quotient over Z/p^N with an
irreducible residue polynomial) or an Eisenstein step over a previously built
field.  Every extension constructed through :func:`extend` is normalized into
this shape, which makes valuations, unit parts and exact division by the
uniformizer cheap to read off.  Elements carry an absolute precision (they are
known modulo uniformizer^prec) and operations propagate precision
pessimistically.

Root finding uses residue roots plus Newton lifting, with digit-wise branching
for multiple residue roots (depth bounded by the valuation of the
discriminant).  General extensions are analysed by a shift / Newton-polygon
refinement loop: residue-irreducible polynomials give unramified steps,
one-slope polygons with denominator equal to the degree give totally ramified
steps (an Eisenstein minimal polynomial for a uniformizer is produced by a
characteristic-polynomial computation), and mixed residue pictures are handled
by enlarging the unramified part first.
"""

import itertools
from fractions import Fraction
from math import gcd


class PadicError(Exception):
    pass


class PrecisionLoss(PadicError):
    pass


class IndistinguishableFromZero(PadicError):
    pass


class ReducibleAtPrecision(PadicError):
    pass


class NotGalois(PadicError):
    pass


class UnsupportedBaseField(PadicError):
    pass


# ---------------------------------------------------------------------------
# finite (residue) fields
# ---------------------------------------------------------------------------


class FFElem:
    __slots__ = ("field", "vec")

    def __init__(self, field, vec):
        self.field = field
        self.vec = tuple(v % field.p for v in vec)

    def __add__(self, other):
        other = self.field.coerce(other)
        return FFElem(self.field, [a + b for a, b in zip(self.vec, other.vec)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self.field.coerce(other)
        return FFElem(self.field, [a - b for a, b in zip(self.vec, other.vec)])

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __neg__(self):
        return FFElem(self.field, [-a for a in self.vec])

    def __mul__(self, other):
        other = self.field.coerce(other)
        return self.field._mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        acc = self.field.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def inv(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in finite field")
        return self ** (self.field.q - 2)

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.field is other.field and self.vec == other.vec
        if isinstance(other, int):
            return self == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.vec))

    def __bool__(self):
        return any(self.vec)

    def is_square(self):
        if not self or self.field.p == 2:
            return True  # squaring is bijective in characteristic 2
        return self ** ((self.field.q - 1) // 2) == self.field.one()

    def sqrt(self):
        if self.field.p == 2:
            return self ** (self.field.q // 2)
        if not self:
            return self
        for c in self.field.elements():  # residue fields are tiny
            if c * c == self:
                return c
        raise ValueError("not a square")

    def frobenius(self):
        return self ** self.field.p

    def abs_trace(self):
        """Trace down to the prime field, as an integer mod p."""
        acc = self
        x = self
        for _ in range(self.field.deg - 1):
            x = x.frobenius()
            acc = acc + x
        assert not any(acc.vec[1:])
        return acc.vec[0]

    def __repr__(self):
        return f"FF{self.field.q}{list(self.vec)}"


class FiniteField:
    """F_{p^deg} as polynomials modulo a monic irreducible (constant term first)."""

    def __init__(self, p, modulus):
        self.p = p
        self.modulus = tuple(c % p for c in modulus)
        assert self.modulus[-1] == 1
        self.deg = len(self.modulus) - 1
        self.q = p ** self.deg

    def coerce(self, x):
        if isinstance(x, FFElem):
            if x.field is self:
                return x
            if x.field.p == self.p and x.field.deg == 1:
                return self.from_int(x.vec[0])
            raise TypeError("element of a different finite field")
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {type(x).__name__}")

    def from_int(self, n):
        return FFElem(self, (n,) + (0,) * (self.deg - 1))

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def gen(self):
        if self.deg == 1:
            return self.one()
        return FFElem(self, (0, 1) + (0,) * (self.deg - 2))

    def elements(self):
        for vec in itertools.product(range(self.p), repeat=self.deg):
            yield FFElem(self, vec)

    def _mul(self, a, b):
        p, d = self.p, self.deg
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a.vec):
            if x:
                for j, y in enumerate(b.vec):
                    if y:
                        prod[i + j] += x * y
        for k in range(2 * d - 2, d - 1, -1):
            v = prod[k] % p
            if v:
                for i in range(d):
                    prod[k - d + i] -= v * self.modulus[i]
        return FFElem(self, prod[:d])

    def __repr__(self):
        return f"GF({self.p}^{self.deg})"


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over finite fields (lists of FFElem, constant term first) ----


def ffp_trim(f):
    f = list(f)
    while f and not f[-1]:
        f.pop()
    return f


def ffp_add(F, f, g):
    n = max(len(f), len(g))
    z = F.zero()
    return ffp_trim([(f[i] if i < len(f) else z) + (g[i] if i < len(g) else z) for i in range(n)])


def ffp_sub(F, f, g):
    n = max(len(f), len(g))
    z = F.zero()
    return ffp_trim([(f[i] if i < len(f) else z) - (g[i] if i < len(g) else z) for i in range(n)])


def ffp_mul(F, f, g):
    if not f or not g:
        return []
    out = [F.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = out[i + j] + a * b
    return ffp_trim(out)


def ffp_divmod(F, f, g):
    f = ffp_trim(f)
    g = ffp_trim(g)
    dg = len(g) - 1
    inv_lead = g[-1].inv()
    q = [F.zero()] * max(len(f) - dg, 0)
    while f and len(f) - 1 >= dg:
        c = f[-1] * inv_lead
        shift = len(f) - 1 - dg
        q[shift] = q[shift] + c
        for i in range(dg + 1):
            f[shift + i] = f[shift + i] - c * g[i]
        f = ffp_trim(f[:-1])
    return ffp_trim(q), f


def ffp_mod(F, f, g):
    return ffp_divmod(F, f, g)[1]


def ffp_gcd(F, f, g):
    f, g = ffp_trim(f), ffp_trim(g)
    while g:
        f, g = g, ffp_mod(F, f, g)
    if f:
        inv = f[-1].inv()
        f = [c * inv for c in f]
    return f


def ffp_powmod(F, base, n, mod):
    acc = [F.one()]
    base = ffp_mod(F, base, mod)
    while n:
        if n & 1:
            acc = ffp_mod(F, ffp_mul(F, acc, base), mod)
        base = ffp_mod(F, ffp_mul(F, base, base), mod)
        n >>= 1
    return acc


def ffp_deriv(F, f):
    return ffp_trim([f[i] * i for i in range(1, len(f))])


def ffp_eval(F, f, x):
    acc = F.zero()
    for c in reversed(f):
        acc = acc * x + c
    return acc


def ffp_roots(F, f):
    return [c for c in F.elements() if not ffp_eval(F, f, c)]


def ffp_squarefree_part(F, f):
    """Squarefree part of a monic polynomial (handles f' = 0 via p-th roots)."""
    f = ffp_trim(f)
    if len(f) <= 2:
        return f
    d = ffp_deriv(F, f)
    if not d:
        # f(x) = g(x^p); take p-th roots of coefficients (inverse Frobenius)
        g = [f[i] ** (F.q // F.p) for i in range(0, len(f), F.p)]
        return ffp_squarefree_part(F, g)
    g = ffp_gcd(F, f, d)
    if len(g) == 1:
        return f
    q, r = ffp_divmod(F, f, g)
    assert not r
    return ffp_squarefree_part(F, q)


def ffp_is_irreducible(F, f):
    """Rabin-style irreducibility test over a finite field."""
    f = ffp_trim(f)
    d = len(f) - 1
    if d == 1:
        return True
    x = [F.zero(), F.one()]
    if ffp_sub(F, ffp_powmod(F, x, F.q ** d, f), x):
        return False
    for ell in _prime_divisors(d):
        g = ffp_gcd(F, ffp_sub(F, ffp_powmod(F, x, F.q ** (d // ell), f), x), f)
        if len(g) - 1 != 0:
            return False
    return True


def _ffp_bezout(F, a, b):
    """(u, v) with u*a + v*b = 1 for coprime a, b."""
    r0, r1 = ffp_trim(a), ffp_trim(b)
    s0, s1 = [F.one()], []
    t0, t1 = [], [F.one()]
    while r1:
        q, r = ffp_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, ffp_sub(F, s0, ffp_mul(F, q, s1))
        t0, t1 = t1, ffp_sub(F, t0, ffp_mul(F, q, t1))
    assert len(r0) == 1
    lead = r0[-1].inv()
    return [c * lead for c in s0], [c * lead for c in t0]


def ff_embed_root(small, big):
    """A canonical root of small.modulus inside big (first in element order)."""
    mod = [big.from_int(c) for c in small.modulus]
    for c in big.elements():
        if not ffp_eval(big, mod, c):
            return c
    raise ValueError("no embedding: residue degrees incompatible")


_IRRED_CACHE = {}


def lex_min_irreducible(p, d):
    """First monic irreducible of degree d over F_p in integer-code order.

    Codes enumerate the non-leading coefficients as base-p digits (constant
    term least significant); deterministic and reproducible across runs.
    """
    key = (p, d)
    if key in _IRRED_CACHE:
        return _IRRED_CACHE[key]
    if d == 1:
        poly = (0, 1)
    else:
        Fp = FiniteField(p, (0, 1))
        poly = None
        for code in range(p ** d):
            coeffs = []
            c = code
            for _ in range(d):
                coeffs.append(c % p)
                c //= p
            if coeffs[0] == 0:
                continue
            cand = tuple(coeffs) + (1,)
            if ffp_is_irreducible(Fp, [Fp.from_int(x) for x in cand]):
                poly = cand
                break
        if poly is None:  # pragma: no cover
            raise AssertionError("no irreducible polynomial found")
    _IRRED_CACHE[key] = poly
    return poly


# shipped table of residue polynomials for p^n, n <= 6 (the output of
# lex_min_irreducible, frozen for documentation; see tests)
RESIDUE_POLY_TABLE = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (3, 1): (0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (3, 6): (2, 1, 0, 0, 0, 0, 1),
}

MAX_UNRAMIFIED_DEGREE = 24

# canonical orderings truncate keys at this many base-p digits so that the
# same choices are made when the pipeline reruns at a higher precision
SORT_DIGITS = 24


# ---------------------------------------------------------------------------
# local fields
# ---------------------------------------------------------------------------


class LocalElem:
    """Tower coordinates plus an absolute precision (in uniformizer units)."""

    __slots__ = ("field", "vec", "prec")

    def __init__(self, field, vec, prec):
        self.field = field
        self.vec = vec
        self.prec = min(prec, field.Nd)

    def __add__(self, other):
        return self.field.add(self, self.field.coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        other = self.field.coerce(other)
        return self.field.add(self, self.field.neg(other))

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __neg__(self):
        return self.field.neg(self)

    def __mul__(self, other):
        return self.field.mul(self, self.field.coerce(other))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers: use div_exact / inv_unit")
        acc = self.field.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, (LocalElem, int)):
            return self.field.eq(self, self.field.coerce(other))
        return NotImplemented

    __hash__ = None

    def valuation(self):
        return valuation(self)

    def is_zero_at_prec(self):
        return self.field.val(self) is None

    def residue(self):
        return self.field.residue(self)

    def __repr__(self):
        return f"<{self.field.short_name()} elem + O(pi^{self.prec})>"


class LocalField:
    """Shared behaviour of unramified bases and Eisenstein steps."""

    def coerce(self, x):
        if isinstance(x, LocalElem):
            if x.field is self:
                return x
            lifted = self.lift_from(x)
            if lifted is not None:
                return lifted
            raise TypeError("element of an unrelated local field")
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__}")

    def parent_chain(self):
        chain = [self]
        f = self
        while isinstance(f, EisensteinExtension):
            f = f.parent
            chain.append(f)
        return chain

    def lift_from(self, x):
        chain = self.parent_chain()
        if x.field not in [id_ for id_ in chain]:
            pass
        for i, f in enumerate(chain):
            if x.field is f:
                out = x
                for step in reversed(chain[:i]):
                    out = step.embed_parent(out)
                return out
        return None

    def from_rational(self, r):
        r = Fraction(r)
        den = r.denominator
        if den % self.p == 0:
            raise ValueError("non-integral rational; scale the model first")
        num = self.from_int(r.numerator)
        return num * self.inv_unit(self.from_int(den))

    def eq(self, x, y):
        return self.val(self.add(x, self.neg(y))) is None

    def degree_abs(self):
        return self.e_abs * self.f_abs

    def short_name(self):
        return f"Q{self.p}[e{self.e_abs},f{self.f_abs}]"

    def __repr__(self):
        return f"LocalField(p={self.p}, e={self.e_abs}, f={self.f_abs}, N={self.Nd})"


class UnramifiedField(LocalField):
    """Unramified extension of Q_p of degree n; vectors of integers mod p^N."""

    def __init__(self, p, n, N, respoly=None):
        if p not in (2, 3):
            raise UnsupportedBaseField(f"residue characteristic {p} is not supported")
        if N < 20:
            raise ValueError("precision must be at least 20 digits")
        self.p = p
        self.n = n
        self.N = N
        self.Nd = N
        self.e_abs = 1
        self.f_abs = n
        if respoly is None:
            respoly = lex_min_irreducible(p, n)
        self.respoly = tuple(int(c) for c in respoly)
        assert len(self.respoly) == n + 1 and self.respoly[-1] % p == 1
        self.pN = p ** N
        self.residue_field = FiniteField(p, self.respoly)

    def zero(self):
        return LocalElem(self, (0,) * self.n, self.Nd)

    def one(self):
        return self.from_int(1)

    def from_int(self, a):
        return LocalElem(self, (a % self.pN,) + (0,) * (self.n - 1), self.Nd)

    def gen(self):
        if self.n == 1:
            return self.one()
        return LocalElem(self, (0, 1) + (0,) * (self.n - 2), self.Nd)

    def uniformizer(self):
        return self.from_int(self.p)

    def add(self, x, y):
        return LocalElem(
            self, tuple((a + b) % self.pN for a, b in zip(x.vec, y.vec)), min(x.prec, y.prec)
        )

    def neg(self, x):
        return LocalElem(self, tuple((-a) % self.pN for a in x.vec), x.prec)

    def rawval(self, x):
        """Valuation of the stored representative, ignoring the precision claim."""
        best = None
        for a in x.vec:
            if a:
                v = 0
                while a % self.p == 0:
                    a //= self.p
                    v += 1
                if best is None or v < best:
                    best = v
                    if best == 0:
                        break
        return self.Nd if best is None else best

    def mul(self, x, y):
        n = self.n
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(x.vec):
            if a:
                for j, b in enumerate(y.vec):
                    if b:
                        prod[i + j] += a * b
        for k in range(2 * n - 2, n - 1, -1):
            v = prod[k] % self.pN
            if v:
                for i in range(n):
                    prod[k - n + i] -= v * self.respoly[i]
        # sharp ultrametric precision: error(xy) >= min(v(x)+b, v(y)+a, a+b)
        prec = min(self.rawval(x) + y.prec, self.rawval(y) + x.prec, x.prec + y.prec)
        return LocalElem(self, tuple(c % self.pN for c in prod[:n]), prec)

    def val(self, x):
        best = None
        for a in x.vec:
            if a:
                v = 0
                while a % self.p == 0:
                    a //= self.p
                    v += 1
                if best is None or v < best:
                    best = v
                    if best == 0:
                        break
        if best is None or best >= x.prec:
            return None
        return best

    def residue(self, x):
        return FFElem(self.residue_field, tuple(a % self.p for a in x.vec))

    def lift_residue(self, r):
        return LocalElem(self, tuple(int(a) for a in r.vec), self.Nd)

    def shift_up(self, x, j):
        pj = self.p ** j
        return LocalElem(self, tuple((a * pj) % self.pN for a in x.vec), min(x.prec + j, self.Nd))

    def shift_down(self, x, j):
        pj = self.p ** j
        vec = []
        for a in x.vec:
            if a % pj:
                raise PrecisionLoss("inexact division by the uniformizer")
            vec.append(a // pj)
        return LocalElem(self, tuple(vec), x.prec - j)

    def inv_unit(self, x):
        r = self.residue(x)
        if not r:
            raise ZeroDivisionError("not a unit")
        y = self.lift_residue(r.inv())
        two = self.from_int(2)
        for _ in range(max(1, self.N.bit_length() + 1)):
            y = self.mul(y, self.add(two, self.neg(self.mul(x, y))))
        return LocalElem(self, y.vec, x.prec)

    def canonical_key(self, x, depth=None):
        d = x.prec if depth is None else min(depth, x.prec)
        if d <= 0:
            return (0,) * self.n
        pd = self.p ** d
        return tuple(a % pd for a in x.vec)

    def with_prec(self, x, prec):
        return LocalElem(self, x.vec, prec)

    def random_element(self, rng, unit=False):
        while True:
            x = LocalElem(self, tuple(rng.randrange(self.pN) for _ in range(self.n)), self.Nd)
            if not unit or self.val(x) == 0:
                return x


class EisensteinExtension(LocalField):
    """Totally ramified step defined by an Eisenstein polynomial over parent."""

    def __init__(self, parent, minpoly):
        # minpoly: coefficients of x^0..x^{e-1} (parent elements); leading 1 implied
        self.parent = parent
        self.p = parent.p
        self.e = len(minpoly)
        if self.e < 2:
            raise ValueError("extension degree must be at least 2")
        self.minpoly = tuple(parent.coerce(c) for c in minpoly)
        for i, c in enumerate(self.minpoly):
            v = parent.val(c)
            if v is not None and v < 1:
                raise ValueError(f"not Eisenstein: coefficient of x^{i} is a unit")
        if parent.val(self.minpoly[0]) != 1:
            raise ValueError("not Eisenstein: constant term valuation != 1")
        self.e_abs = parent.e_abs * self.e
        self.f_abs = parent.f_abs
        self.Nd = parent.Nd * self.e
        self.residue_field = parent.residue_field
        self._inv_t = None

    def zero(self):
        return LocalElem(self, (self.parent.zero(),) * self.e, self.Nd)

    def one(self):
        return self.embed_parent(self.parent.one())

    def from_int(self, a):
        return self.embed_parent(self.parent.from_int(a))

    def embed_parent(self, c):
        vec = (c,) + (self.parent.zero(),) * (self.e - 1)
        return LocalElem(self, vec, min(c.prec * self.e, self.Nd))

    def gen(self):
        vec = [self.parent.zero()] * self.e
        vec[1] = self.parent.one()
        return LocalElem(self, tuple(vec), self.Nd)

    def uniformizer(self):
        return self.gen()

    def add(self, x, y):
        return LocalElem(
            self,
            tuple(self.parent.add(a, b) for a, b in zip(x.vec, y.vec)),
            min(x.prec, y.prec),
        )

    def neg(self, x):
        return LocalElem(self, tuple(self.parent.neg(a) for a in x.vec), x.prec)

    def rawval(self, x):
        best = None
        for i, c in enumerate(x.vec):
            v = self.parent.rawval(c)
            t = self.e * v + i
            if best is None or t < best:
                best = t
        return min(best, self.Nd) if best is not None else self.Nd

    def mul(self, x, y):
        e = self.e
        par = self.parent
        prod = [par.zero()] * (2 * e - 1)
        for i, a in enumerate(x.vec):
            if any_nonzero(a):
                for j, b in enumerate(y.vec):
                    if any_nonzero(b):
                        prod[i + j] = par.add(prod[i + j], par.mul(a, b))
        for k in range(2 * e - 2, e - 1, -1):
            v = prod[k]
            if any_nonzero(v):
                for i in range(e):
                    prod[k - e + i] = par.add(prod[k - e + i], par.neg(par.mul(v, self.minpoly[i])))
        prec = min(self.rawval(x) + y.prec, self.rawval(y) + x.prec, x.prec + y.prec)
        return LocalElem(self, tuple(prod[:e]), prec)

    def val(self, x):
        best = None
        for i, c in enumerate(x.vec):
            v = self.parent.val(c)
            if v is not None:
                t = self.e * v + i
                if best is None or t < best:
                    best = t
        if best is None or best >= x.prec:
            return None
        return best

    def residue(self, x):
        return self.parent.residue(x.vec[0])

    def lift_residue(self, r):
        return self.embed_parent(self.parent.lift_residue(r))

    def shift_up(self, x, j):
        out = x
        t = self.gen()
        for _ in range(j):
            out = self.mul(out, t)
        return LocalElem(self, out.vec, min(x.prec + j, self.Nd))

    def _inv_t_elem(self):
        """-(pi_parent / t) as an integral unit of the extension, cached.

        With t^e = -(m_{e-1} t^{e-1} + ... + m_0) and m_0 = pi_par * u0:
        pi_par / t = -t^{e-1} * u0^{-1} * (1 + sum_{i>=1} (m_i/m_0) t^i)^{-1}.
        """
        if self._inv_t is None:
            par = self.parent
            u0 = par.shift_down(self.minpoly[0], 1)
            inv_u0 = par.inv_unit(u0)
            w_vec = [par.one()]
            for i in range(1, self.e):
                w_vec.append(par.mul(par.shift_down(self.minpoly[i], 1), inv_u0))
            one_plus_w = LocalElem(self, tuple(w_vec), self.Nd)
            t_pow = self.gen() ** (self.e - 1)
            val = self.mul(self.mul(t_pow, self.embed_parent(inv_u0)), self.inv_unit(one_plus_w))
            self._inv_t = self.neg(val)
        return self._inv_t

    def shift_down(self, x, j):
        out = x
        for _ in range(j):
            w = self.mul(out, self._inv_t_elem())  # = out * pi_par / t, val >= e
            vec = tuple(self.parent.shift_down(c, 1) for c in w.vec)
            out = LocalElem(self, vec, w.prec - self.e + (self.e - 1))
        return LocalElem(self, out.vec, x.prec - j)

    def inv_unit(self, x):
        r = self.residue(x)
        if not r:
            raise ZeroDivisionError("not a unit")
        y = self.lift_residue(r.inv())
        two = self.from_int(2)
        for _ in range(max(1, self.Nd.bit_length() + 1)):
            y = self.mul(y, self.add(two, self.neg(self.mul(x, y))))
        return LocalElem(self, y.vec, x.prec)

    def canonical_key(self, x, depth=None):
        d = x.prec if depth is None else min(depth, x.prec)
        out = []
        for i, c in enumerate(x.vec):
            sub = max(0, -(-(d - i) // self.e))  # ceil((d - i)/e)
            out.append(self.parent.canonical_key(c, sub))
        return tuple(out)

    def with_prec(self, x, prec):
        vec = []
        for i, c in enumerate(x.vec):
            sub = max(0, -(-(prec - i) // self.e))
            vec.append(self.parent.with_prec(c, sub))
        return LocalElem(self, tuple(vec), prec)

    def random_element(self, rng, unit=False):
        while True:
            x = LocalElem(self, tuple(self.parent.random_element(rng) for _ in range(self.e)), self.Nd)
            if not unit or self.val(x) == 0:
                return x


def any_nonzero(c):
    if isinstance(c, int):
        return c != 0
    if isinstance(c.vec[0], int):
        return any(c.vec)
    return any(any_nonzero(s) for s in c.vec)


# ---------------------------------------------------------------------------
# public element-level operations
# ---------------------------------------------------------------------------


def make_unramified(p, n, N=60, respoly=None):
    """The unramified extension of Q_p of residue degree n at precision N."""
    if p not in (2, 3):
        raise UnsupportedBaseField("p must be 2 or 3")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MAX_UNRAMIFIED_DEGREE and respoly is None:
        raise UnsupportedBaseField(
            f"degree {n} beyond the residue polynomial table; pass respoly explicitly"
        )
    if respoly is None:
        respoly = RESIDUE_POLY_TABLE.get((p, n)) or lex_min_irreducible(p, n)
    return UnramifiedField(p, n, N, respoly)


def valuation(x):
    """Normalized valuation (the field's uniformizer has valuation 1)."""
    v = x.field.val(x)
    if v is None:
        raise IndistinguishableFromZero(
            f"element is O(pi^{x.prec}); increase the working precision"
        )
    return v


def val_or_none(x):
    return x.field.val(x)


def div_exact(x, y):
    """x / y when v(x) >= v(y); the quotient stays integral."""
    F = x.field
    vy = F.val(y)
    if vy is None:
        raise IndistinguishableFromZero("division by an element indistinguishable from 0")
    u = F.shift_down(y, vy)
    xs = F.shift_down(x, vy)
    return F.mul(xs, F.inv_unit(u))


# ---------------------------------------------------------------------------
# polynomials over local fields (lists of LocalElem, constant term first)
# ---------------------------------------------------------------------------


def pol_coerce(F, f):
    return [F.coerce(c) for c in f]


def pol_trim(F, f):
    f = list(f)
    while len(f) > 1 and not any_nonzero(f[-1]):
        f.pop()
    return f


def pol_mul(F, f, g):
    out = [F.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return out


def pol_eval(F, f, x):
    acc = F.zero()
    for c in reversed(f):
        acc = acc * x + c
    return acc


def pol_deriv(F, f):
    return [f[i] * i for i in range(1, len(f))] or [F.zero()]


def pol_shift(F, f, c):
    """f(x + c) by repeated synthetic addition."""
    out = list(f)
    n = len(f)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + out[j + 1] * c
    return out


def pol_divide_root(F, f, r):
    """f / (x - r) for a verified root r (synthetic division)."""
    n = len(f) - 1
    out = [F.zero()] * n
    acc = f[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc = f[i] + acc * r
    return out


def pol_residue(F, f):
    return [F.residue(c) for c in f]


def pol_content_val(F, f):
    vals = [F.val(c) for c in f]
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


def pol_shift_down(F, f, j):
    return [F.shift_down(c, j) for c in f]


# ---------------------------------------------------------------------------
# division-free characteristic polynomial (Berkowitz) and discriminants
# ---------------------------------------------------------------------------


def berkowitz_charpoly(F, A):
    """Coefficients of det(xI - A), constant term first, monic; division-free."""
    n = len(A)
    z = F.zero()
    poly_desc = [F.one(), F.neg(A[0][0])]  # descending degree
    for i in range(1, n):
        R = A[i][:i]
        C = [A[k][i] for k in range(i)]
        M = [row[:i] for row in A[:i]]
        v = [F.one(), F.neg(A[i][i])]
        acc = C
        for _ in range(i):
            dot = z
            for a, b in zip(R, acc):
                dot = F.add(dot, F.mul(a, b))
            v.append(F.neg(dot))
            acc = [
                sum_ring(F, (F.mul(M[r][c], acc[c]) for c in range(i))) for r in range(i)
            ]
        new_desc = [z] * (i + 2)
        for ai, a in enumerate(v):
            if ai > i + 1:
                break
            for bi, b in enumerate(poly_desc):
                if ai + bi < i + 2:
                    new_desc[ai + bi] = F.add(new_desc[ai + bi], F.mul(a, b))
        poly_desc = new_desc
    return list(reversed(poly_desc))


def sum_ring(F, items):
    acc = F.zero()
    for it in items:
        acc = F.add(acc, it)
    return acc


def pol_disc(F, f):
    """Discriminant of a monic polynomial via the Sylvester resultant of (f, f')."""
    f = pol_trim(F, f)
    n = len(f) - 1
    fp = pol_trim(F, pol_deriv(F, f))
    m = len(fp) - 1
    if m < 0 or (m == 0 and not any_nonzero(fp[0])):
        return F.zero()
    size = n + m
    rows = []
    for i in range(m):
        row = [F.zero()] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(n):
        row = [F.zero()] * size
        for j, c in enumerate(reversed(fp)):
            row[i + j] = c
        rows.append(row)
    cp = berkowitz_charpoly(F, rows)
    res = cp[0]
    if size % 2:
        res = F.neg(res)
    if (n * (n - 1) // 2) % 2:
        res = F.neg(res)
    return res


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------


def _newton_polish(F, g, gp, x):
    """Newton-iterate x toward a root of g, then recertify its precision.

    Pessimistic precision propagation decays through the iteration even
    though the approximation improves; afterwards the root is re-declared at
    the rigorous bound min(coefficient precision, residual valuation) minus
    v(g'(x)) (a stored-representative Newton certificate).
    """
    for _ in range(F.Nd.bit_length() + 3):
        fx = pol_eval(F, g, x)
        if F.val(fx) is None:
            break
        try:
            x = x - div_exact(fx, pol_eval(F, gp, x))
        except PrecisionLoss:
            break
    return _recertify_root(F, g, gp, x)


def _recertify_root(F, g, gp, x):
    vp = F.val(pol_eval(F, gp, x))
    if vp is None:
        return x
    P = min(c.prec for c in g)
    gfull = [F.with_prec(c, F.Nd) for c in g]
    xfull = F.with_prec(x, F.Nd)
    res = pol_eval(F, gfull, xfull)
    vres = F.val(res)
    cert = res.prec if vres is None else vres
    new_prec = min(P, cert) - vp
    if new_prec > x.prec:
        x = F.with_prec(x, new_prec)
    return x


def roots_in(F, g, budget=None):
    """All roots of g lying in F, each verified to precision.

    g needs a unit leading coefficient after content removal and a nonzero
    discriminant at precision.  Simple residue roots are lifted by Newton
    iteration; multiple residue roots branch digit by digit with total depth
    bounded by v(disc g) (computed lazily, only if branching happens).
    """
    g = pol_coerce(F, g)
    g = pol_trim(F, g)
    if len(g) == 1:
        return []
    cont = pol_content_val(F, g)
    if cont is None:
        raise PrecisionLoss("zero polynomial at working precision")
    if cont > 0:
        g = pol_shift_down(F, g, cont)
    if F.val(g[-1]) != 0:
        raise PrecisionLoss("leading coefficient is not a unit after normalization")
    inv_lead = F.inv_unit(g[-1])
    g = [c * inv_lead for c in g]
    gp = pol_deriv(F, g)

    roots = []
    lazy_budget = [budget]

    def get_budget():
        if lazy_budget[0] is None:
            vd = F.val(pol_disc(F, g))
            if vd is None:
                raise PrecisionLoss("discriminant indistinguishable from zero")
            lazy_budget[0] = vd + 1
        return lazy_budget[0]

    def record(x):
        fx = pol_eval(F, g, x)
        vfx = F.val(fx)
        if vfx is not None and vfx < x.prec - 2:
            return
        for r in roots:
            if F.eq(r, x):
                return
        roots.append(x)

    def search(h, center, scale, depth):
        RF = F.residue_field
        hbar = ffp_trim(pol_residue(F, h))
        if not hbar:
            raise PrecisionLoss("branch polynomial vanishes at working precision")
        hbar_d = ffp_deriv(RF, hbar)
        for rbar in ffp_roots(RF, hbar):
            r = F.lift_residue(rbar)
            simple = bool(hbar_d) and bool(ffp_eval(RF, hbar_d, rbar))
            if simple:
                hp = pol_deriv(F, h)
                x = _newton_polish(F, h, hp, r)
                full = center + (F.shift_up(x, scale) if scale else x)
                record(_newton_polish(F, g, gp, full))
            else:
                h2 = pol_shift(F, h, r)
                t = F.uniformizer()
                scaled = [h2[i] * t ** i for i in range(len(h2))]
                cont2 = pol_content_val(F, scaled)
                if cont2 is None:
                    raise PrecisionLoss("branch polynomial vanished at precision")
                if depth + cont2 > get_budget():
                    raise PrecisionLoss("root branching exceeded the discriminant budget")
                h3 = pol_shift_down(F, scaled, cont2)
                search(h3, center + (F.shift_up(r, scale) if scale else r), scale + 1, depth + cont2)

    search(g, F.zero(), 0, 0)
    roots.sort(key=lambda x: F.canonical_key(x, SORT_DIGITS * F.e_abs))
    return roots


def is_square(F, x):
    """Whether x is a square in F, plus a verified witness square root."""
    x = F.coerce(x)
    v = valuation(x)
    if x.prec - v < 2 * F.e_abs + 2:
        raise PrecisionLoss("insufficient precision margin for a square decision")
    if v % 2:
        return False, None
    u = F.shift_down(x, v) if v else x
    if F.p != 2:
        r = F.residue(u)
        if not r.is_square():
            return False, None
        y0 = F.lift_residue(r.sqrt())
        g = [F.neg(u), F.zero(), F.one()]
        y = _newton_polish(F, g, pol_deriv(F, g), y0)
        return True, (F.shift_up(y, v // 2) if v else y)
    g = [F.neg(u), F.zero(), F.one()]
    rts = roots_in(F, g, budget=2 * F.e_abs + 2)
    if not rts:
        return False, None
    return True, (F.shift_up(rts[0], v // 2) if v else rts[0])


def canonical_nonsquare_unit(F):
    """Deterministic nonsquare unit (odd residue characteristic only)."""
    if F.p == 2:
        raise ValueError("not defined for residue characteristic 2")
    for r in F.residue_field.elements():
        if r and not r.is_square():
            return F.lift_residue(r)
    raise AssertionError("unreachable: half the units are nonsquare")


def contains_sqrt(L, d):
    """True iff d (element of L or of a field below it) is a square in L."""
    return is_square(L, L.coerce(d))[0]


# ---------------------------------------------------------------------------
# extensions
# ---------------------------------------------------------------------------


class ExtensionResult:
    """Output of extend(): the new field plus how the old one sits inside.

    field  -- normalized tower (possibly enlarged unramified part + Eisenstein)
    root   -- a zero of the defining polynomial inside `field`
    embed  -- map taking elements of the original field into `field`
    e_rel, f_rel -- ramification/residue degree of the step
    """

    __slots__ = ("field", "root", "embed", "e_rel", "f_rel", "defining_poly")

    def __init__(self, field, root, embed, e_rel, f_rel, defining_poly):
        self.field = field
        self.root = root
        self.embed = embed
        self.e_rel = e_rel
        self.f_rel = f_rel
        self.defining_poly = defining_poly


def _enlarge_unramified(F, d):
    """(F', embed) with the unramified part of F enlarged by a factor d."""
    if d == 1:
        return F, (lambda x: x)
    if isinstance(F, UnramifiedField):
        if F.n * d > MAX_UNRAMIFIED_DEGREE:
            raise UnsupportedBaseField("unramified degree beyond supported table")
        big = make_unramified(F.p, F.n * d, F.N)
        respoly_elems = [big.from_int(c) for c in F.respoly]
        rts = roots_in(big, respoly_elems)
        if len(rts) != F.n:
            raise PrecisionLoss("could not embed the unramified base")
        root = rts[0]

        def embed(x, _root=root, _big=big):
            acc = _big.zero()
            for c in reversed(x.vec):
                acc = acc * _root + _big.from_int(c)
            return LocalElem(_big, acc.vec, min(x.prec, _big.Nd))

        return big, embed
    parent2, pembed = _enlarge_unramified(F.parent, d)
    big = EisensteinExtension(parent2, [pembed(c) for c in F.minpoly])

    def embed(x, _big=big, _pembed=pembed):
        return LocalElem(_big, tuple(_pembed(c) for c in x.vec), x.prec)

    return big, embed


def _compose(f, g):
    return lambda x: g(f(x))


def _chart_root(L, poly, chart):
    """Pick the canonical root of poly in L and map it back through the chart."""
    rts = roots_in(L, poly)
    if not rts:
        raise PrecisionLoss("constructed field does not contain the expected root")
    r = rts[0]
    for c, j in reversed(chart):
        r = c + (L.shift_up(r, j) if j else r)
    return r


def _charpoly_of_power(F, m, alpha):
    """Characteristic polynomial of multiplication by x^alpha in F[x]/(m)."""
    d = len(m) - 1

    def reduce_mod(vec):
        vec = list(vec)
        for k in range(len(vec) - 1, d - 1, -1):
            c = vec[k]
            if any_nonzero(c):
                for i in range(d):
                    vec[k - d + i] = vec[k - d + i] - c * m[i]
            vec.pop()
        while len(vec) < d:
            vec.append(F.zero())
        return vec

    col = reduce_mod([F.zero()] * alpha + [F.one()])
    cols = []
    for _ in range(d):
        cols.append(col)
        col = reduce_mod([F.zero()] + list(col))
    A = [[cols[j][i] for j in range(d)] for i in range(d)]
    return berkowitz_charpoly(F, A)


def _hensel_lift_factor(F, m, A0, B0):
    """Lift the coprime residue factorization m = A0 * B0; return the A factor."""
    RF = F.residue_field
    if len(ffp_gcd(RF, A0, B0)) - 1 != 0:
        raise ReducibleAtPrecision("residue factors are not coprime")
    U, V = _ffp_bezout(RF, A0, B0)  # U*A0 + V*B0 = 1
    A = [F.lift_residue(c) for c in A0]
    B = [F.lift_residue(c) for c in B0]
    for k in range(1, F.Nd):
        AB = pol_mul(F, A, B)
        err = [m[i] - AB[i] if i < len(AB) else m[i] for i in range(len(m))]
        vs = [F.val(e) for e in err]
        if all(v is None for v in vs):
            break
        if any(v is not None and v < k for v in vs):
            raise PrecisionLoss("Hensel lift lost divisibility")
        ebar = pol_residue(F, [F.shift_down(e, k) for e in err])
        # solve dA*B0 + dB*A0 = ebar with deg dA < deg A0:
        #   dA = (V*ebar) mod A0,  dB = U*ebar + q*B0  where V*ebar = q*A0 + dA
        q, dA = ffp_divmod(RF, ffp_mul(RF, V, ebar), A0)
        dB = ffp_add(RF, ffp_mul(RF, U, ebar), ffp_mul(RF, q, B0))
        for i, cbar in enumerate(dA):
            if cbar:
                A[i] = A[i] + F.shift_up(F.lift_residue(cbar), k)
        for i, cbar in enumerate(dB):
            if cbar:
                if i >= len(B) - 1:
                    raise PrecisionLoss("Hensel correction exceeded factor degree")
                B[i] = B[i] + F.shift_up(F.lift_residue(cbar), k)
    return pol_trim(F, A)


def _hensel_factor_block(F, m):
    """Residue of m is prod (x - r_i)^s over distinct conjugate roots; lift and
    return the block of the canonically smallest root."""
    RF = F.residue_field
    mbar = ffp_trim(pol_residue(F, m))
    sf = ffp_squarefree_part(RF, mbar)
    rts = ffp_roots(RF, sf)
    if not rts:
        raise ReducibleAtPrecision("no residue root after enlargement")
    rts.sort(key=lambda r: r.vec)
    s = (len(mbar) - 1) // len(rts)
    A0 = [RF.one()]
    for _ in range(s):
        A0 = ffp_mul(RF, A0, [-rts[0], RF.one()])
    B0, rem = ffp_divmod(RF, mbar, A0)
    if rem:
        raise ReducibleAtPrecision("residue block division failed")
    return _hensel_lift_factor(F, m, A0, B0)


def _adjoin_irreducible(F, m):
    """Analysis loop for monic integral m, irreducible over F (no roots in F)."""
    deg_m = len(m) - 1
    cur = list(m)
    cur_field = F
    embed_acc = lambda x: x
    chart = []  # root(previous) = c + t^j * root(next)
    e_rel, f_rel = 1, 1
    rounds = 0
    max_rounds = 4 * F.Nd // max(deg_m, 1) + 12
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise PrecisionLoss("extension analysis did not stabilize")
        CF = cur_field
        RF = CF.residue_field
        mbar = ffp_trim(pol_residue(CF, cur))
        if len(mbar) != len(cur):
            raise PrecisionLoss("leading coefficient lost at precision")
        sf = ffp_squarefree_part(RF, mbar)
        if not ffp_is_irreducible(RF, sf):
            raise ReducibleAtPrecision("residue factorization splits coprimely")
        f0 = len(sf) - 1
        d_cur = len(cur) - 1
        if d_cur % f0:
            raise ReducibleAtPrecision("residue degree does not divide the degree")
        if f0 == d_cur:
            # unramified step
            big, emb = _enlarge_unramified(CF, f0)
            chart2 = [(emb(c), j) for (c, j) in chart]
            root = _chart_root(big, [emb(c) for c in cur], chart2)
            return ExtensionResult(big, root, _compose(embed_acc, emb), e_rel, f_rel * f0, m)
        if f0 > 1:
            # mixed: enlarge the unramified part, keep one conjugate block
            big, emb = _enlarge_unramified(CF, f0)
            chart = [(emb(c), j) for (c, j) in chart]
            embed_acc = _compose(embed_acc, emb)
            cur_field = big
            cur = _hensel_factor_block(big, [emb(c) for c in cur])
            f_rel *= f0
            continue
        # f0 == 1: shift to the residue root and look at the Newton polygon
        rbars = ffp_roots(RF, sf)
        assert len(rbars) == 1
        c = CF.lift_residue(rbars[0])
        sh = pol_shift(CF, cur, c)
        v0 = CF.val(sh[0])
        if v0 is None:
            raise PrecisionLoss("constant term vanishes at working precision")
        d = len(sh) - 1
        for i in range(1, d):
            vi = CF.val(sh[i])
            if vi is not None and vi * d < v0 * (d - i):
                raise ReducibleAtPrecision("Newton polygon has several slopes")
        g_ = gcd(v0, d)
        h, e0 = v0 // g_, d // g_
        if e0 == 1:
            # integer slope h: substitute x -> t^h x and divide by t^{h d}
            t = CF.uniformizer()
            scaled = [sh[i] * t ** (h * i) for i in range(len(sh))]
            cur = pol_shift_down(CF, scaled, h * d)
            chart.append((c, h))
            continue
        if e0 == d:
            # totally ramified: produce an Eisenstein polynomial for a uniformizer
            alpha = pow(h, -1, e0)
            beta = (alpha * h - 1) // e0
            Mw = _charpoly_of_power(CF, sh, alpha)
            Mt = []
            for i, coeff in enumerate(Mw):
                need = beta * (d - i)
                vi = CF.val(coeff)
                if vi is None:
                    if coeff.prec < need:
                        raise PrecisionLoss("uniformizer polynomial below precision")
                    Mt.append(CF.shift_down(coeff, need) if need else coeff)
                    continue
                if vi < need:
                    raise PrecisionLoss("uniformizer minimal polynomial not integral")
                Mt.append(CF.shift_down(coeff, need) if need else coeff)
            if CF.val(Mt[0]) != 1 or any(
                CF.val(Mt[i]) is not None and CF.val(Mt[i]) < 1 for i in range(1, d)
            ):
                raise PrecisionLoss("expected Eisenstein shape was not certified")
            L = EisensteinExtension(CF, Mt[:d])
            emb = L.embed_parent
            chart2 = [(emb(cc), j) for (cc, j) in chart] + [(emb(c), 0)]
            root = _chart_root(L, [emb(cc) for cc in sh], chart2)
            return ExtensionResult(L, root, _compose(embed_acc, emb), e_rel * d, f_rel, m)
        raise PrecisionLoss(
            f"mixed ramification slope {h}/{e0}: certified analysis not available; factor first"
        )


def extend(F, m):
    """Extend F by a monic integral polynomial of degree >= 2.

    Returns an :class:`ExtensionResult` whose field is in normalized shape.
    Raises ReducibleAtPrecision when m has a root in F or visibly factors;
    PrecisionLoss when (e, f) cannot be certified at the working precision.
    """
    m = pol_coerce(F, m)
    if len(m) < 3:
        raise ValueError("degree must be at least 2")
    if not F.eq(m[-1], F.one()):
        raise ValueError("polynomial must be monic")
    if roots_in(F, m):
        raise ReducibleAtPrecision("polynomial has a root in the base field")
    return _adjoin_irreducible(F, m)


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------


def _tower_levels(L):
    levels = []
    f = L
    while isinstance(f, EisensteinExtension):
        levels.append(f)
        f = f.parent
    return f, list(reversed(levels))


def _height_of(field, base, levels):
    if field is base:
        return 0
    for i, lvl in enumerate(levels):
        if field is lvl:
            return i + 1
    raise TypeError("element does not belong to this tower")


class FieldHom:
    """An automorphism of a tower, stored by generator images."""

    __slots__ = ("field", "base_image", "gen_images", "_base_powers")

    def __init__(self, field, base_image, gen_images):
        self.field = field
        self.base_image = base_image  # element of the base field
        self.gen_images = gen_images  # elements of `field`, one per Eisenstein level
        self._base_powers = None

    def _apply_base(self, x, base):
        if self._base_powers is None:
            pw = [base.one()]
            for _ in range(base.n - 1):
                pw.append(base.mul(pw[-1], self.base_image))
            self._base_powers = pw
        acc = base.zero()
        for c, pw in zip(x.vec, self._base_powers):
            if c:
                acc = base.add(acc, base.mul(base.from_int(c), pw))
        return LocalElem(base, acc.vec, x.prec)

    def apply(self, x):
        base, levels = _tower_levels(self.field)
        h = _height_of(x.field, base, levels)
        return self._apply_at(x, h, base, levels)

    def _apply_at(self, x, h, base, levels):
        if h == 0:
            y = self._apply_base(x, base)
            for lvl in levels:
                y = lvl.embed_parent(y)
            return y
        gen_img = self.gen_images[h - 1]
        acc = self.field.zero()
        power = self.field.one()
        for i, c in enumerate(x.vec):
            ci = self._apply_at(c, h - 1, base, levels)
            if i:
                power = self.field.mul(power, gen_img)
            acc = self.field.add(acc, self.field.mul(ci, power))
        return acc

    def compose(self, other):
        """self after other."""
        base, _ = _tower_levels(self.field)
        new_base = self._apply_base(other.base_image, base)
        new_gens = [self.apply(g) for g in other.gen_images]
        return FieldHom(self.field, new_base, new_gens)

    def eq(self, other):
        base, _ = _tower_levels(self.field)
        if not base.eq(self.base_image, other.base_image):
            return False
        return all(self.field.eq(a, b) for a, b in zip(self.gen_images, other.gen_images))

    def residue_frob_power(self):
        base, _ = _tower_levels(self.field)
        r = base.residue(self.base_image)
        x = base.residue(base.gen())
        for j in range(base.n):
            if x == r:
                return j
            x = x ** base.p
        raise PrecisionLoss("base image is not a residue conjugate of the generator")

    def is_inertial(self):
        return self.residue_frob_power() == 0

    def order(self):
        ident = identity_hom(self.field)
        acc = self
        for k in range(1, 2 * self.field.e_abs * self.field.f_abs + 1):
            if acc.eq(ident):
                return k
            acc = acc.compose(self)
        raise PadicError("automorphism order exceeded the group bound")

    def sort_key(self):
        base, _ = _tower_levels(self.field)
        depth = SORT_DIGITS * self.field.e_abs
        return (
            base.canonical_key(self.base_image, SORT_DIGITS),
            tuple(self.field.canonical_key(g, depth) for g in self.gen_images),
        )


def identity_hom(L):
    base, levels = _tower_levels(L)
    gens = []
    for i, lvl in enumerate(levels):
        g = lvl.gen()
        for l2 in levels[i + 1:]:
            g = l2.embed_parent(g)
        gens.append(g)
    return FieldHom(L, base.gen(), gens)


def automorphisms(L, K=None):
    """Automorphisms of the tower L over K (an unramified field below L).

    Returns (autos, inertia, frobenius): all automorphisms fixing K, those
    acting trivially on the residue field, and a canonical representative
    inducing x -> x^|k_K| on the residue field (the identity-most one, so a
    totally ramified L/K gets the automorphism fixing L pointwise).
    Raises NotGalois when the count falls short of [L:K].
    """
    base, levels = _tower_levels(L)
    nK = 1 if K is None else K.f_abs
    if L.f_abs % nK or (K is not None and K.e_abs != 1):
        raise ValueError("K must be an unramified subfield of L")
    if base.n == 1:
        base_roots = [base.one()]
    else:
        respoly_elems = [base.from_int(c) for c in base.respoly]
        base_roots = roots_in(base, respoly_elems)
    if len(base_roots) != base.n:
        raise PrecisionLoss("unramified base is not split at precision")
    # order the roots so index j is the image under frobenius^j
    ordered = []
    cur = base.residue(base.gen())
    for j in range(base.n):
        match = [r for r in base_roots if base.residue(r) == cur]
        if len(match) != 1:
            raise PrecisionLoss("residue conjugates not separated")
        ordered.append(match[0])
        cur = cur ** base.p
    partial = [(ordered[j], []) for j in range(base.n) if j % nK == 0]
    for li, lvl in enumerate(levels):
        new_partial = []
        for base_img, gen_imgs in partial:
            hom = FieldHom(L, base_img, gen_imgs + [None] * (len(levels) - li))
            mp = [hom._apply_at(c, li, base, levels) for c in lvl.minpoly]
            mp.append(L.one())
            for r in roots_in(L, mp):
                new_partial.append((base_img, gen_imgs + [r]))
        partial = new_partial
        if not partial:
            break
    autos = [FieldHom(L, b, g) for b, g in partial]
    expected = L.e_abs * (L.f_abs // nK)
    if len(autos) != expected:
        raise NotGalois(f"found {len(autos)} automorphisms, expected {expected}")
    autos.sort(key=lambda a: a.sort_key())
    inertia = [a for a in autos if a.is_inertial()]
    frob_power = nK % base.n
    candidates = [a for a in autos if a.residue_frob_power() == frob_power]
    if not candidates:
        raise NotGalois("no Frobenius representative found")
    ident = identity_hom(L)
    candidates.sort(key=lambda a: (not a.eq(ident), a.sort_key()))
    return autos, inertia, candidates[0]
