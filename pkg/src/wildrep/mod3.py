"""The mod-3 Galois representation from explicit 3-torsion points.

Builds a basis {P, Q} of E[3] over L = K(E[3]), applies the inertia
generator and a Frobenius representative to the coordinates, recognizes the
images as F3-combinations through the group law, and assembles the matrices
in GL2(F3).  Used as an independent oracle against the synthesized
representations (trace/det compatibility, inertia order).
"""

from dataclasses import dataclass

from .padic import (
    PadicError,
    PrecisionLoss,
    SORT_DIGITS,
    automorphisms,
    div_exact,
    val_or_none,
)
from .classify import three_torsion_field


class BasisRecognitionFailure(PadicError):
    pass


# -- rational function arithmetic over a tower (slopes may be non-integral) --


class Frac:
    """num / t^k over a local field; enough for the affine group law."""

    __slots__ = ("F", "num", "k")

    def __init__(self, F, num, k=0):
        self.F = F
        self.num = num
        self.k = k

    @classmethod
    def of(cls, x):
        return cls(x.field, x, 0)

    def _align(self, other):
        k = max(self.k, other.k)
        a = self.num if self.k == k else self.F.shift_up(self.num, k - self.k)
        b = other.num if other.k == k else self.F.shift_up(other.num, k - other.k)
        return a, b, k

    def __add__(self, other):
        other = self._coerce(other)
        a, b, k = self._align(other)
        return Frac(self.F, a + b, k)

    def __sub__(self, other):
        other = self._coerce(other)
        a, b, k = self._align(other)
        return Frac(self.F, a - b, k)

    def __neg__(self):
        return Frac(self.F, -self.num, self.k)

    def __mul__(self, other):
        other = self._coerce(other)
        return Frac(self.F, self.num * other.num, self.k + other.k)

    def div(self, other):
        other = self._coerce(other)
        v = other.num.valuation()
        u = self.F.shift_down(other.num, v)
        inv = self.F.inv_unit(u)
        return Frac(self.F, self.num * inv, self.k + v - other.k)

    def _coerce(self, x):
        if isinstance(x, Frac):
            return x
        if isinstance(x, int):
            return Frac(self.F, self.F.from_int(x), 0)
        return Frac(self.F, self.F.coerce(x), 0)

    def eq(self, other):
        other = self._coerce(other)
        a, b, k = self._align(other)
        return self.F.eq(a, b)

    def as_integral(self):
        """Back to a plain element; requires v(num) >= k."""
        if self.k == 0:
            return self.num
        return self.F.shift_down(self.num, self.k)

    def normalize(self):
        v = val_or_none(self.num)
        if v is None or self.k == 0:
            return self
        drop = min(v, self.k)
        if drop:
            return Frac(self.F, self.F.shift_down(self.num, drop), self.k - drop)
        return self


# -- affine group law ---------------------------------------------------------


def point_neg(EL, P):
    if P is None:
        return None
    x, y = P
    return (x, -y - EL.a1 * x - EL.a3)


def point_add(EL, P1, P2):
    """Chord-tangent addition with exact fraction bookkeeping."""
    if P1 is None:
        return P2
    if P2 is None:
        return P1
    F = EL.field
    x1, y1 = Frac.of(P1[0]), Frac.of(P1[1])
    x2, y2 = Frac.of(P2[0]), Frac.of(P2[1])
    a1, a2, a3, a4 = (Frac.of(c) for c in (EL.a1, EL.a2, EL.a3, EL.a4))
    if x1.eq(x2):
        if y2.eq(Frac.of(point_neg(EL, P1)[1])):
            return None
        num = x1 * x1 * 3 + a2 * x1 * 2 + a4 - a1 * y1
        den = y1 * 2 + a1 * x1 + a3
        lam = num.div(den)
    else:
        lam = (y2 - y1).div(x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    x3 = x3.normalize()
    y3 = y3.normalize()
    return (x3.as_integral(), y3.as_integral())


def point_on_curve(EL, P):
    if P is None:
        return True
    x, y = P
    F = EL.field
    lhs = y * y + EL.a1 * x * y + EL.a3 * y
    rhs = x ** 3 + EL.a2 * x * x + EL.a4 * x + EL.a6
    return F.eq(lhs, rhs)


def point_eq(F, P1, P2):
    if P1 is None or P2 is None:
        return P1 is None and P2 is None
    return F.eq(P1[0], P2[0]) and F.eq(P1[1], P2[1])


# -- torsion basis and matrices ------------------------------------------------


@dataclass
class TorsionBasis:
    P: tuple
    Q: tuple
    points: list  # all eight nonzero 3-torsion points
    combos: dict  # (a, b) -> point a*P + b*Q for (a, b) != (0, 0)
    model: object  # the base-changed Weierstrass model over L


@dataclass
class Mod3Rep:
    inertia_matrix: tuple  # ((a,b),(c,d)) over F3
    frobenius_matrix: tuple
    inertia_order: int
    basis: TorsionBasis
    torsion: object  # ThreeTorsionData
    sigma_hom: object
    frob_hom: object
    autos: object


def mat_mul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(2)) % 3 for j in range(2))
        for i in range(2)
    )


def mat_det(A):
    return (A[0][0] * A[1][1] - A[0][1] * A[1][0]) % 3


def mat_trace(A):
    return (A[0][0] + A[1][1]) % 3


MAT_ID = ((1, 0), (0, 1))


def mat_order(A):
    acc = A
    for k in range(1, 25):
        if acc == MAT_ID:
            return k
        acc = mat_mul(acc, A)
    raise ValueError("order exceeded the GL2(F3) exponent")


def three_torsion_points(E, K, td=None):
    """The eight nonzero 3-torsion points over L = K(E[3]), verified.

    Each point satisfies the curve equation and 2*P = -P (equivalent to
    3P = O for a nonzero point).
    """
    if td is None:
        td = three_torsion_field(E, K)
    EL = td.model
    F = td.field_L
    pts = td.points
    if len(pts) != 8:
        raise PrecisionLoss("expected eight 3-torsion points")
    for P in pts:
        if not point_on_curve(EL, P):
            raise PrecisionLoss("3-torsion point fails the curve equation")
        if not point_eq(F, point_add(EL, P, P), point_neg(EL, P)):
            raise PrecisionLoss("point is not 3-torsion: 2P != -P")
    return td, pts


def torsion_basis(E, K, td=None):
    """Deterministic basis: P from the lexicographically smallest x-root,
    Q from the next x-root not in {P, -P}; all 8 combinations certified."""
    td, pts = three_torsion_points(E, K, td)
    F = td.field_L
    EL = td.model

    def ykey(P):
        return F.canonical_key(P[1], SORT_DIGITS * F.e_abs)

    by_x = {}
    for P in pts:
        key = F.canonical_key(P[0], SORT_DIGITS * F.e_abs)
        by_x.setdefault(key, []).append(P)
    xkeys = sorted(by_x)
    if len(xkeys) != 4:
        raise PrecisionLoss("x-coordinates of E[3] not separated at precision")
    Pcands = sorted(by_x[xkeys[0]], key=ykey)
    P = Pcands[0]
    Q = sorted(by_x[xkeys[1]], key=ykey)[0]
    combos = {}
    for a in range(3):
        for b in range(3):
            if a == 0 and b == 0:
                continue
            acc = None
            for _ in range(a):
                acc = point_add(EL, acc, P)
            for _ in range(b):
                acc = point_add(EL, acc, Q)
            combos[(a, b)] = acc
    # basis certificate: the 8 combinations hit all 8 points
    for key, pt in combos.items():
        if pt is None:
            raise BasisRecognitionFailure("basis combination degenerated to O")
        if not any(point_eq(F, pt, R) for R in pts):
            raise BasisRecognitionFailure("combination escaped the point list")
    return TorsionBasis(P=P, Q=Q, points=pts, combos=combos, model=EL)


def _recognize(F, combos, pt):
    for (a, b), R in combos.items():
        if point_eq(F, pt, R):
            return (a, b)
    raise BasisRecognitionFailure("image point matches no basis combination")


def _matrix_of(F, EL, combos, hom, P, Q):
    cols = []
    for base_pt in (P, Q):
        img = (hom.apply(base_pt[0]), hom.apply(base_pt[1]))
        if not point_on_curve(EL, img):
            raise PrecisionLoss("automorphism image leaves the curve")
        cols.append(_recognize(F, combos, img))
    # columns are images of P and Q
    return ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))


def mod3_matrices(E, K, td=None, fix=None):
    """Matrices of the inertia generator and a Frobenius lift on E[3].

    The inertia generator is an inertial automorphism of maximal order; the
    Frobenius representative is the canonical one from `automorphisms`,
    optionally refined to fix a given element (used to pin the Frobenius
    that fixes sqrt(d) in the twist case).  Basis and choices deterministic.
    """
    if td is None:
        td = three_torsion_field(E, K)
    basis = torsion_basis(E, K, td)
    F = td.field_L
    EL = basis.model
    autos, inertia, frob = automorphisms(F, K)
    # deterministic maximal-order inertial automorphism
    best = None
    for h in inertia:
        o = h.order()
        key = (-o, h.sort_key())
        if best is None or key < best[0]:
            best = (key, h)
    sigma = best[1]
    if fix is not None:
        cands = [h for h in autos if h.residue_frob_power() == (K.f_abs % _base_n(F))]
        cands = [h for h in cands if F.eq(h.apply(fix), fix)]
        if not cands:
            raise PrecisionLoss("no Frobenius representative fixes the twist root")
        from .padic import identity_hom

        ident = identity_hom(F)
        cands.sort(key=lambda h: (not h.eq(ident), h.sort_key()))
        frob = cands[0]
    M_sigma = _matrix_of(F, EL, basis.combos, sigma, basis.P, basis.Q)
    M_frob = _matrix_of(F, EL, basis.combos, frob, basis.P, basis.Q)
    return Mod3Rep(
        inertia_matrix=M_sigma,
        frobenius_matrix=M_frob,
        inertia_order=mat_order(M_sigma),
        basis=basis,
        torsion=td,
        sigma_hom=sigma,
        frob_hom=frob,
        autos=(autos, inertia, frob),
    )


def _base_n(F):
    from .padic import _tower_levels

    base, _ = _tower_levels(F)
    return base.n


def frobenius_trace_mod3(rep):
    """Trace of the computed Frobenius matrix (an element of F3, as an int)."""
    return mat_trace(rep.frobenius_matrix)
