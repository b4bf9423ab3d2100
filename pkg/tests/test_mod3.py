import pytest

from wildrep.padic import make_unramified
from wildrep.curve import WeierstrassModel
from wildrep.classify import three_torsion_field
from wildrep.mod3 import (
    MAT_ID,
    _matrix_of,
    frobenius_trace_mod3,
    mat_det,
    mat_mul,
    mat_order,
    mat_trace,
    mod3_matrices,
    point_add,
    point_eq,
    point_neg,
    point_on_curve,
    three_torsion_points,
    torsion_basis,
)

Q2 = make_unramified(2, 1, 60)


def test_three_torsion_points_example():
    # y^2 + y = x^3: psi_3 = 3x^4 + 3x = 3x(x+1)(x^2 - x + 1); x = 0, -1 rational
    E = WeierstrassModel(Q2, 0, 0, 1, 0, 0)
    td, pts = three_torsion_points(E, Q2)
    F = td.field_L
    xs = set()
    for P in pts:
        assert point_on_curve(td.model, P)
        xs.add(tuple(F.canonical_key(P[0], 8)))
    assert len(xs) == 4
    assert any(F.eq(P[0], F.zero()) for P in pts)
    assert any(F.eq(P[0], F.from_int(-1)) for P in pts)


def test_doubling_gives_negative():
    E = WeierstrassModel(Q2, 0, 0, 1, 0, 0)
    td, pts = three_torsion_points(E, Q2)
    EL = td.model
    F = td.field_L
    for P in pts:
        assert point_eq(F, point_add(EL, P, P), point_neg(EL, P))


def test_basis_combinations_cover_all_points():
    E = WeierstrassModel(Q2, 0, 0, 1, 0, 0)
    basis = torsion_basis(E, Q2)
    assert len(basis.combos) == 8
    F = basis.model.field
    xs = {tuple(F.canonical_key(P[0], 8)) for P in (basis.P, basis.Q)}
    assert len(xs) == 2  # distinct abscissas


def test_good_curve_inertia_identity():
    E = WeierstrassModel(Q2, 0, 0, 1, 0, 0)
    rep = mod3_matrices(E, Q2)
    assert rep.inertia_matrix == MAT_ID
    assert rep.inertia_order == 1
    assert mat_det(rep.frobenius_matrix) == 2  # cyclotomic determinant 2^1


def test_wild_c4_inertia_conjugate_of_standard_matrix():
    # every order-4 determinant-1 matrix in GL2(F3) is conjugate to [[0,2],[1,0]]
    E = WeierstrassModel(Q2, 0, 1, 0, 1, -3)
    rep = mod3_matrices(E, Q2)
    assert rep.inertia_order == 4
    assert mat_det(rep.inertia_matrix) == 1
    assert mat_trace(rep.inertia_matrix) == 0
    sq = mat_mul(rep.inertia_matrix, rep.inertia_matrix)
    assert sq == ((2, 0), (0, 2))  # squares to -Id


def test_frobenius_determinant_is_cyclotomic():
    for coeffs, n in ([[0, 1, 0, 1, -3], 1], [[0, 1, 0, -3, 1], 1]):
        rep = mod3_matrices(WeierstrassModel(Q2, *coeffs), Q2)
        assert mat_det(rep.frobenius_matrix) == pow(2, n, 3)


def test_fixture_matrix_traces():
    g = ((2, 2), (1, 2))
    assert mat_trace(g) == 1 and mat_det(g) == 2
    g5 = g
    for _ in range(4):
        g5 = mat_mul(g5, g)
    assert g5 == tuple(tuple((-x) % 3 for x in row) for row in g)  # g^5 = -g
    assert mat_trace(g5) == 2
    sigma = ((0, 2), (1, 0))
    g3 = mat_mul(g, sigma)
    assert g3 == ((2, 1), (2, 2))
    assert mat_trace(g3) == 1


def test_c8_coset_trace_families():
    # the four Frobenius lifts split into two +- families with traces {1},{2}
    E = WeierstrassModel(Q2, 0, 1, 0, 1, -3)
    td = three_torsion_field(E, Q2)
    rep = mod3_matrices(E, Q2, td)
    autos, inertia, frob = rep.autos
    basis = rep.basis
    F = td.field_L
    traces = []
    for h in inertia:
        comp = frob.compose(h)
        M = _matrix_of(F, basis.model, basis.combos, comp, basis.P, basis.Q)
        traces.append(mat_trace(M))
    assert sorted(traces) == [1, 1, 2, 2]
    t = frobenius_trace_mod3(rep)
    assert t in (1, 2)


def test_basis_change_conjugates_matrices():
    # (P, Q) -> (Q, -P) conjugates both matrices; traces and dets unchanged
    E = WeierstrassModel(Q2, 0, 1, 0, -3, 1)
    td = three_torsion_field(E, Q2)
    rep = mod3_matrices(E, Q2, td)
    F = td.field_L
    EL = rep.basis.model
    P2 = rep.basis.Q
    Q2_ = point_neg(EL, rep.basis.P)
    combos = {}
    for a in range(3):
        for b in range(3):
            if a == 0 and b == 0:
                continue
            acc = None
            for _ in range(a):
                acc = point_add(EL, acc, P2)
            for _ in range(b):
                acc = point_add(EL, acc, Q2_)
            combos[(a, b)] = acc
    M1 = _matrix_of(F, EL, combos, rep.sigma_hom, P2, Q2_)
    M2 = _matrix_of(F, EL, combos, rep.frob_hom, P2, Q2_)
    assert mat_trace(M1) == mat_trace(rep.inertia_matrix)
    assert mat_det(M1) == mat_det(rep.inertia_matrix)
    assert mat_trace(M2) == mat_trace(rep.frobenius_matrix)
    assert mat_det(M2) == mat_det(rep.frobenius_matrix)
    assert mat_order(M1) == mat_order(rep.inertia_matrix)


def test_inertia_order_matches_classification():
    for coeffs, order in (
        ([0, 0, 1, 0, 0], 1),
        ([0, 1, 0, 4, 4], 3),
        ([0, 0, 0, 0, 2], 2),
        ([0, 1, 0, 1, -3], 4),
    ):
        rep = mod3_matrices(WeierstrassModel(Q2, *coeffs), Q2)
        assert rep.inertia_order == order
