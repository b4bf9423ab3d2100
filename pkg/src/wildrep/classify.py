"""Routing of an input curve to its reduction/inertia class.

For p = 3 the classification works with the minimal discriminant valuation,
the Kodaira type and 2-torsion rationality over unramified enlargements; for
p = 2 it builds the 3-torsion field as an explicit tower and reads off the
ramification index.  Also provides the 2-torsion data (case selection inside
the wild C3 branch), the Galois-group identification of the 3-torsion field
for wild C4 curves, and the quadratic twist search for wild C2/C6 at p = 2.
"""

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .padic import (
    PadicError,
    PrecisionLoss,
    ReducibleAtPrecision,
    SORT_DIGITS,
    contains_sqrt,
    extend,
    is_square,
    make_unramified,
    pol_coerce,
    pol_divide_root,
    pol_eval,
    pol_trim,
    roots_in,
    val_or_none,
    valuation,
    _enlarge_unramified,
)
from .curve import (
    WeierstrassModel,
    division_poly_3,
    quadratic_twist,
    tate_algorithm,
    two_torsion_cubic,
)


class InconsistentClassification(PadicError):
    pass


class SearchExhausted(PadicError):
    pass


class TowerBudgetExceeded(PadicError):
    pass


@dataclass
class InertiaClass:
    tag: str  # Good | PotentiallyMultiplicative | TameCyclic | WildC2 | WildC3 | WildC4 | WildC6 | NonAbelian
    order: Optional[int] = None
    subtype: Optional[str] = None  # for NonAbelian: "C3:C4" | "Q8" | "SL2F3"
    evidence: dict = dc_field(default_factory=dict)

    def is_wild_cyclic(self):
        return self.tag in ("WildC2", "WildC3", "WildC4", "WildC6")

    def label(self):
        if self.tag == "TameCyclic":
            return f"TameCyclic({self.order})"
        if self.tag == "NonAbelian":
            return f"NonAbelian({self.subtype})"
        return self.tag


@dataclass
class TwoTorsionData:
    cubic: list
    degree_KE2: int
    field_F: object = None
    embed: object = None
    roots: list = None
    square_difference: object = None  # (i, j, witness) with alpha_i - alpha_j square
    sigma_label: str = ""


@dataclass
class ThreeTorsionData:
    field_L: object
    embed: object
    degree: int
    e: int
    f: int
    x_roots: list
    points: list  # eight (x, y) pairs
    model: WeierstrassModel  # base-changed model over field_L
    G_name: Optional[str] = None


@dataclass
class TwistSearchResult:
    d_label: str
    d_int: int
    d_elem: object
    twisted: WeierstrassModel
    twisted_neron: object
    eta_kind: str  # always "ramified"
    outcome: str  # GoodAfterTwist | TameAfterTwist


def potentially_good(E):
    """True iff j is integral, i.e. v(j) >= 0 (v(c4) infinite counts as j = 0)."""
    vj = E.v_j()
    return vj is None or vj >= 0


def _has_root_over_unramified(K, poly, degrees=(1, 2, 3)):
    """Whether poly acquires a root over the unramified enlargements of K.

    Roots of a cubic over the maximal unramified extension live in the
    enlargement of degree 1, 2 or 3.
    """
    for d in degrees:
        if d == 1:
            if roots_in(K, poly):
                return True
            continue
        U, emb = _enlarge_unramified(K, d)
        if roots_in(U, [emb(c) for c in poly]):
            return True
    return False


def inertia_image(E, K, tower_cap=48):
    """Classify the inertia image of E/K.  Returns (InertiaClass, NeronData).

    The classification is performed on the minimal model from Tate's
    algorithm.  For p = 3 it uses the parity of v(disc), the Kodaira type and
    2-torsion over the unramified enlargements; for p = 2 it reads the
    ramification index of K(E[3])/K.
    """
    nd = tate_algorithm(E)
    Em = nd.minimal_model
    evidence = {
        "kodaira_type": nd.kodaira_type,
        "v_delta_min": nd.v_delta_min,
        "conductor_exponent": nd.conductor_exponent,
    }
    if not potentially_good(Em):
        vj = Em.v_j()
        evidence["v_j"] = vj
        return InertiaClass("PotentiallyMultiplicative", evidence=evidence), nd
    if nd.v_delta_min == 0:
        return InertiaClass("Good", order=1, evidence=evidence), nd

    if K.p == 3:
        v0 = nd.v_delta_min
        evidence["v_delta_mod4"] = v0 % 4
        cubic = two_torsion_cubic(Em)
        two_tors = _has_root_over_unramified(K, cubic)
        evidence["two_torsion_over_unramified"] = two_tors
        if v0 % 2 == 0:
            if nd.kodaira_type == "I0*":
                if not two_tors:
                    raise InconsistentClassification(
                        "type I0* with no 2-torsion over the unramified closure"
                    )
                return InertiaClass("TameCyclic", order=2, evidence=evidence), nd
            if two_tors:
                raise InconsistentClassification(
                    "even v(disc), type != I0*, but 2-torsion over the unramified closure"
                )
            if v0 % 4 == 0:
                return InertiaClass("WildC3", order=3, evidence=evidence), nd
            return InertiaClass("WildC6", order=6, evidence=evidence), nd
        # odd v(disc): tame C4 or the dicyclic case, split by 2-torsion
        if two_tors:
            return InertiaClass("TameCyclic", order=4, evidence=evidence), nd
        return InertiaClass("NonAbelian", order=12, subtype="C3:C4", evidence=evidence), nd

    # p == 2: e(K(E[3])/K) = |I|
    td = three_torsion_field(Em, K, cap=tower_cap)
    evidence["torsion_field_degree"] = td.degree
    evidence["torsion_field_e"] = td.e
    evidence["torsion_field_f"] = td.f
    order_map = {
        2: ("WildC2", None),
        3: ("TameCyclic", None),
        4: ("WildC4", None),
        6: ("WildC6", None),
        8: ("NonAbelian", "Q8"),
        24: ("NonAbelian", "SL2F3"),
    }
    if td.e == 1:
        raise InconsistentClassification("trivial inertia but nonzero minimal discriminant")
    if td.e not in order_map:
        raise InconsistentClassification(f"inertia order {td.e} is not in the classification")
    tag, subtype = order_map[td.e]
    cls = InertiaClass(tag, order=td.e, subtype=subtype, evidence=evidence)
    cls.evidence["three_torsion"] = td
    return cls, nd


# ---------------------------------------------------------------------------
# p = 3: two-torsion data
# ---------------------------------------------------------------------------

SQUARE_DIFFERENCE_SCAN = [(2, 1), (3, 1), (3, 2), (1, 2), (1, 3), (2, 3)]


def two_torsion_data(E, K):
    """Case data inside the wild C3 branch (p = 3).

    degree_KE2 = 3 iff disc(f) is a square in K; in that case F = K(alpha_1)
    contains all three roots and the six ordered differences are tested for
    squareness in the fixed scan order.
    """
    cubic = two_torsion_cubic(E)
    from .padic import pol_disc

    disc = pol_disc(K, cubic)
    sq, _ = is_square(K, disc)
    if not sq:
        return TwoTorsionData(cubic=cubic, degree_KE2=6)
    res = extend(K, cubic)
    F = res.field
    roots = roots_in(F, [res.embed(c) for c in cubic])
    if len(roots) != 3:
        raise PrecisionLoss("two-torsion cubic does not split in its own field")
    sqdiff = None
    label = ""
    for i, j in SQUARE_DIFFERENCE_SCAN:
        delta = roots[i - 1] - roots[j - 1]
        ok, wit = is_square(F, delta)
        if ok:
            sqdiff = (i, j, wit)
            label = f"sigma(alpha_{j}) = alpha_{i}"
            break
    if sqdiff is None:
        label = "sigma(alpha_1) = alpha_2"
    return TwoTorsionData(
        cubic=cubic,
        degree_KE2=3,
        field_F=F,
        embed=res.embed,
        roots=roots,
        square_difference=sqdiff,
        sigma_label=label,
    )


# ---------------------------------------------------------------------------
# p = 2: the 3-torsion field as an explicit tower
# ---------------------------------------------------------------------------


def _resolvent_cubic(L, q):
    """Resolvent cubic of the monic quartic x^4+ax^3+bx^2+cx+d.

    Roots are the values q_i + s_i over the three ways of splitting the
    quartic into two quadratics; disc(resolvent) = disc(quartic).
    """
    a, b, c, d = q[3], q[2], q[1], q[0]
    return [
        -(a * a * d - 4 * b * d + c * c),
        a * c - 4 * d,
        -b,
        L.one(),
    ]


def _verify_quartic_split(L, q, f1, f2):
    prod = [
        f1[0] * f2[0],
        f1[0] * f2[1] + f1[1] * f2[0],
        f1[0] + f2[0] + f1[1] * f2[1],
        f1[1] + f2[1],
        L.one(),
    ]
    return all(L.eq(x, yv) for x, yv in zip(prod, q))


def split_quartic(L, q):
    """Try to factor a rootless monic quartic into two monic quadratics over L.

    For each resolvent-cubic root y = q0 + s0 the constant terms are the
    roots of t^2 - y t + d; the linear coefficients follow linearly from
    p + r = a and p*s + r*q = c (and symmetrically from the other quadratic
    when the constants are degenerate).  The product is verified exactly.
    """
    from .padic import div_exact

    a, b, c, d = q[3], q[2], q[1], q[0]
    rc = _resolvent_cubic(L, q)
    try:
        ys = roots_in(L, rc)
    except PrecisionLoss:
        return None
    for y in ys:
        # route 1: constants first
        try:
            qs = roots_in(L, [d, -y, L.one()])
        except PrecisionLoss:
            qs = []
        if len(qs) == 2:
            q0, s0 = qs
            den = s0 - q0
            vd = val_or_none(den)
            num = c - a * q0
            vn = val_or_none(num)
            if vd is not None and (vn is None or vn >= vd):
                p0 = div_exact(num, den)
                r0 = a - p0
                f1, f2 = [q0, p0, L.one()], [s0, r0, L.one()]
                if _verify_quartic_split(L, q, f1, f2):
                    return f1, f2
        # route 2: linear coefficients first
        try:
            ps = roots_in(L, [b - y, -a, L.one()])
        except PrecisionLoss:
            ps = []
        if len(ps) == 2:
            p0, r0 = ps
            den = r0 - p0
            vd = val_or_none(den)
            num = c - p0 * y
            vn = val_or_none(num)
            if vd is not None and (vn is None or vn >= vd):
                q0 = div_exact(num, den)
                s0 = y - q0
                f1, f2 = [q0, p0, L.one()], [s0, r0, L.one()]
                if _verify_quartic_split(L, q, f1, f2):
                    return f1, f2
    return None


class _Tower:
    """Bookkeeping for a growing extension tower with tracked elements."""

    def __init__(self, K):
        self.K = K
        self.L = K
        self.embed = lambda x: x
        self.e = 1
        self.f = 1

    def adjoin(self, poly):
        res = extend(self.L, poly)
        old_embed = self.embed
        self.L = res.field
        self.embed = lambda x, _old=old_embed, _new=res.embed: _new(_old(x))
        self.e *= res.e_rel
        self.f *= res.f_rel
        return res

    def degree(self):
        return self.e * self.f


def three_torsion_field(E, K, cap=48):
    """Build L = K(E[3]) step by step (p = 2) and return ThreeTorsionData.

    The x-coordinates are adjoined through quadratic and cubic steps (a
    rootless quartic is first split into quadratics over the current field,
    using resolvent-cubic adjunctions when necessary), then the y-coordinates
    through the point quadratics.  The degree is capped to keep the
    non-abelian cases from exhausting time; exceeding the cap raises
    TowerBudgetExceeded.
    """
    if K.p != 2:
        raise ValueError("three-torsion tower construction is for p = 2")
    tower = _Tower(K)
    psi = division_poly_3(E)
    inv3 = K.inv_unit(K.from_int(3))
    g_over_K = [c * inv3 for c in psi]

    def g_on_L():
        return [tower.embed(c) for c in g_over_K]

    for _guard in range(16):
        gl = g_on_L()
        L = tower.L
        found = roots_in(L, gl)
        if len(found) == 4:
            break
        rem = gl
        for r in found:
            rem = pol_divide_root(L, rem, r)
        degree = len(rem) - 1
        if tower.degree() * 2 > cap:
            raise TowerBudgetExceeded(
                f"3-torsion tower degree would exceed the cap {cap}"
            )
        if degree == 2:
            tower.adjoin(rem)
            continue
        if degree == 3:
            tower.adjoin(rem)
            continue
        # degree 4, no roots
        sp = split_quartic(L, rem)
        if sp:
            tower.adjoin(sp[0])
            continue
        rc = _resolvent_cubic(L, rem)
        ys = roots_in(L, rc)
        progressed = False
        for y in ys:
            for cand in ([rem[0], -y, L.one()], [rem[2] - y, -rem[3], L.one()]):
                try:
                    has_roots = bool(roots_in(L, cand))
                except PrecisionLoss:
                    continue  # degenerate auxiliary quadratic; try the other one
                if not has_roots:
                    tower.adjoin(cand)
                    progressed = True
                    break
            if progressed:
                break
        if progressed:
            continue
        if not ys:
            tower.adjoin(rc)
            continue
        raise PrecisionLoss("quartic splitting made no progress")
    else:
        raise PrecisionLoss("3-torsion tower construction did not stabilize")

    # y-coordinates
    for _guard in range(8):
        L = tower.L
        EL = E.base_change(L, tower.embed)
        xs = roots_in(L, g_on_L())
        missing = None
        points = []
        for x in xs:
            yq = [
                -(x ** 3 + EL.a2 * x * x + EL.a4 * x + EL.a6),
                EL.a1 * x + EL.a3,
                L.one(),
            ]
            yrts = roots_in(L, yq)
            if not yrts:
                missing = yq
                break
            y = yrts[0]
            points.append((x, y))
            points.append((x, -y - EL.a1 * x - EL.a3))
        if missing is None:
            break
        if tower.degree() * 2 > cap:
            raise TowerBudgetExceeded(
                f"3-torsion tower degree would exceed the cap {cap}"
            )
        tower.adjoin(missing)
    else:
        raise PrecisionLoss("y-coordinate adjunction did not stabilize")

    L = tower.L
    return ThreeTorsionData(
        field_L=L,
        embed=tower.embed,
        degree=tower.degree(),
        e=tower.e,
        f=tower.f,
        x_roots=xs,
        points=points,
        model=E.base_change(L, tower.embed),
    )


def classify_G(td, K, n):
    """Name G = Gal(K(E[3])/K) for a wild C4 curve: C4, Q8, D4 or C8.

    Degree 4 forces C4 (n even); degree 8 with n even is Q8; degree 8 with n
    odd is D4 when some ramified quadratic extension of K embeds into L
    (three index-2 subgroups) and C8 otherwise (the unique quadratic
    subextension is then unramified).
    """
    if td.e != 4:
        raise InconsistentClassification("classify_G requires inertia order 4")
    if td.degree == 4:
        if n % 2:
            raise InconsistentClassification("G = C4 requires even residue degree")
        td.G_name = "C4"
        return td
    if td.degree != 8:
        raise InconsistentClassification(f"unexpected [K(E[3]):K] = {td.degree}")
    if n % 2 == 0:
        td.G_name = "Q8"
        return td
    for d_int, d_elem, ram in square_class_representatives(K):
        if not ram:
            continue
        if contains_sqrt(td.field_L, td.embed(d_elem)):
            td.G_name = "D4"
            return td
    td.G_name = "C8"
    return td


# ---------------------------------------------------------------------------
# p = 2: square classes and the quadratic twist search
# ---------------------------------------------------------------------------


def square_class_representatives(K):
    """Representatives of the nontrivial square classes of K^* (p = 2).

    Units are enumerated modulo 8 (squareness of a 2-adic unit is decided
    modulo uniformizer^(2e+1) = 8 here); each class representative is
    reported as (integer_combination, element, is_ramified).  The full list
    is {u, u * 2} over unit class representatives.
    """
    if K.p != 2:
        raise ValueError("square classes in this form are specific to p = 2")
    import itertools

    n = K.f_abs
    units = []
    for vec in itertools.product(range(8), repeat=n):
        if not any(c % 2 for c in vec):
            continue
        units.append(vec)
    # squares of units mod 8
    squares = set()
    for vec in units:
        x = _unit_from_vec(K, vec)
        squares.add(K.canonical_key(x * x, 3))
    classes = []
    seen = set()
    for vec in units:
        x = _unit_from_vec(K, vec)
        key = None
        for cvec in classes:
            c = _unit_from_vec(K, cvec)
            # x ~ c iff x * c is a square (class group has exponent 2)
            if K.canonical_key(x * c, 3) in squares:
                key = cvec
                break
        if key is None:
            classes.append(vec)
    out = []
    two = K.from_int(2)
    U2, emb2 = _enlarge_unramified(K, 2)
    for vec in classes:
        u = _unit_from_vec(K, vec)
        triv, _ = is_square(K, u)
        if not triv:
            unram = is_square(U2, emb2(u))[0]
            out.append((_vec_label(K, vec, 0), u, not unram))
        for_ram = u * two
        out.append((_vec_label(K, vec, 1), for_ram, True))
    # drop the trivial ramified duplicate order: keep deterministic order as built
    return out


def _unit_from_vec(K, vec):
    x = K.zero()
    g = K.gen()
    acc = K.one()
    for i, c in enumerate(vec):
        if c:
            x = x + K.from_int(c) * acc
        acc = acc * g
    return x


def _vec_label(K, vec, eps):
    if K.f_abs == 1:
        s = str(vec[0])
    else:
        s = "+".join(f"{c}*w^{i}" if i else str(c) for i, c in enumerate(vec) if c)
    return f"({s})*2" if eps else s


def twist_search_p2(E, K, cls, tower_cap=48):
    """Find the ramified quadratic twist making E good (C2) or tame C3 (C6).

    Scans the ramified square classes of K in a fixed order; for each
    candidate d the twist is run through Tate's algorithm, and for the C6
    case the 3-torsion tower of the twist certifies inertia of order 3.
    Raises SearchExhausted if no candidate works (upstream misclassification).
    """
    if cls.tag not in ("WildC2", "WildC6"):
        raise ValueError("twist search applies to wild C2/C6 at p = 2")
    nd = tate_algorithm(E)
    Em = nd.minimal_model
    for label, d, ram in square_class_representatives(K):
        if not ram:
            continue
        Et = quadratic_twist(Em, d)
        ndt = tate_algorithm(Et)
        if cls.tag == "WildC2":
            if ndt.v_delta_min == 0:
                return TwistSearchResult(
                    d_label=label,
                    d_int=0,
                    d_elem=d,
                    twisted=ndt.minimal_model,
                    twisted_neron=ndt,
                    eta_kind="ramified",
                    outcome="GoodAfterTwist",
                )
        else:
            if ndt.v_delta_min not in (4, 8):
                continue  # tame C3 twists have v(disc) in {4, 8}
            td = three_torsion_field(ndt.minimal_model, K, cap=tower_cap)
            if td.e == 3:
                return TwistSearchResult(
                    d_label=label,
                    d_int=0,
                    d_elem=d,
                    twisted=ndt.minimal_model,
                    twisted_neron=ndt,
                    eta_kind="ramified",
                    outcome="TameAfterTwist",
                )
    raise SearchExhausted("no ramified quadratic twist produced the expected reduction")
