import itertools

import pytest

from wildrep.cyc24 import (
    CycInt,
    F9Elem,
    I as CI,
    SQRTM2,
    SQRTM3,
    ZETA3,
    reduce_mod3,
    zeta_pow,
)
from wildrep.padic import make_unramified
from wildrep.curve import WeierstrassModel, quadratic_twist
from wildrep.classify import two_torsion_data, inertia_image
from wildrep.galrep import (
    CaseMismatch,
    Mat2,
    MultipleConsistentPairs,
    NoConsistentPair,
    UnknownGenerator,
    evaluate,
    group_order,
    pipeline,
    select_character_pair,
    synth_p2_a,
    synth_p2_b,
    synth_p2_c,
    synth_p3_a,
    synth_p3_b,
    verify,
)

Q2 = make_unramified(2, 1, 60)
Q3 = make_unramified(3, 1, 60)
Q9 = make_unramified(3, 2, 60)


def run(F, coeffs):
    return pipeline(WeierstrassModel(F, *coeffs), F)


def test_p3a_matrices():
    r = run(Q3, [0, 0, 0, 6, 4])
    rep = r.rep
    assert rep.case_tag == "p3a"
    # char poly x^2 + 3: trace 0, det 3
    assert rep.frob_matrix.trace() == CycInt(0)
    assert rep.frob_matrix.det() == CycInt(3)
    sigma = rep.inertia_gens[0][1]
    assert sigma.trace() == CycInt(-1)
    assert sigma.order() == 3
    # S3 relation: Frob sigma Frob^-1 = sigma^-1
    F, S = rep.frob_matrix, sigma
    lhs = F * S * F.adjugate()  # adjugate = det * inverse; det is central
    rhs = (S * S) * F.det()  # sigma^-1 = sigma^2
    assert lhs == rhs


def test_p3b_matrices_and_word_trace():
    r = run(Q3, [0, 0, 0, 6, 1])
    rep = r.rep
    assert rep.case_tag == "p3bi"
    sigma = rep.inertia_gens[0][1]
    # psi(sigma) = (-1 - sqrt(-3))/2 = zeta3^2 exactly
    assert sigma.a == ZETA3 * ZETA3
    assert sigma.a == (CycInt(-1) - SQRTM3).divide_exact(2)
    _, tr, _ = evaluate(rep, ["Frob", "sigma"])
    assert tr == (CycInt(3), 0)


def test_p3b_even_n_scalar_frobenius():
    r = run(Q9, [0, 0, 0, 6, 1])
    rep = r.rep
    assert rep.case_tag == "p3bi"
    # (-3)^(n/2) Id for n = 2
    assert rep.frob_matrix == Mat2.scalar(CycInt(-3))
    assert rep.frob_matrix.det() == CycInt(9)


def test_p3c_twist_identity_exact():
    base = run(Q3, [0, 0, 0, 6, 1])
    twisted = run(Q3, [0, 0, 0, 54, 27])
    assert twisted.rep.case_tag == "p3c"
    assert twisted.rep.frob_matrix == base.rep.frob_matrix
    assert twisted.rep.inertia_gens[0][1] == base.rep.inertia_gens[0][1]
    labels = [lab for (lab, _m, _o) in twisted.rep.inertia_gens]
    assert labels == ["sigma", "tau"]
    tau = twisted.rep.inertia_gens[1][1]
    assert tau == -Mat2.identity()
    assert group_order([m for (_l, m, _o) in twisted.rep.inertia_gens]) == 6


def test_p3c_extra_generator_properties():
    r = run(Q3, [0, 0, 0, 54, 27])
    sigma = r.rep.inertia_gens[0][1]
    tau = r.rep.inertia_gens[1][1]
    assert tau * tau == Mat2.identity()
    assert sigma * tau == tau * sigma
    assert (sigma * tau).order() == 6


def test_unramified_twist_identity_bii():
    # E (b.ii) and its eps-twist (b.i): Frobenius differs by a global sign,
    # inertia matrices are identical
    w = Q9.gen()
    E = WeierstrassModel(Q9, 0, 0, 0, 6 * w, 1 + w)
    r = pipeline(E, Q9)
    assert r.rep.case_tag == "p3bii"
    from wildrep.padic import canonical_nonsquare_unit

    eps = canonical_nonsquare_unit(Q9)
    Et = quadratic_twist(E, eps)
    rt = pipeline(Et, Q9)
    assert rt.rep.case_tag == "p3bi"
    assert r.rep.frob_matrix == -rt.rep.frob_matrix
    assert r.rep.inertia_gens[0][1] == rt.rep.inertia_gens[0][1]


def test_p2a_matrices():
    rep = synth_p2_a(2)
    assert rep.frob_matrix == Mat2.scalar(CycInt(-2))
    assert rep.frob_matrix.det() == CycInt(4)
    sigma = rep.inertia_gens[0][1]
    assert sigma ** 4 == Mat2.identity()
    assert sigma ** 2 == -Mat2.identity()
    assert sigma.trace() == CycInt(0)
    with pytest.raises(CaseMismatch):
        synth_p2_a(1)


def test_p2b_matrices():
    repD = synth_p2_b(1, "D4")
    assert repD.frob_matrix.det() == CycInt(2)
    sigma = repD.inertia_gens[0][1]
    assert sigma.trace() == CycInt(0)
    repQ = synth_p2_b(2, "Q8")
    F, S = repQ.frob_matrix, repQ.inertia_gens[0][1]
    # quaternion relation: F S F^-1 = S^-1
    lhs = F * S * F.adjugate()
    rhs = (S ** 3) * F.det()
    assert lhs == rhs
    assert repQ.frob_matrix.det() == CycInt(4)
    with pytest.raises(CaseMismatch):
        synth_p2_b(1, "Q8")
    with pytest.raises(CaseMismatch):
        synth_p2_b(2, "D4")


def test_select_character_pair_examples():
    assert select_character_pair(1, 1) == {1, 3}
    assert select_character_pair(1, 2) == {5, 7}
    # {1,5} fails the inertia-determinant constraint: 1 + 5 = 2 mod 4
    assert (1 + 5) % 4 != 0


def brute_force_pair(n, t):
    """Independent exhaustive search over all exponent pairs."""
    chiF = SQRTM2 ** n
    out = []
    for a, b in itertools.combinations((1, 3, 5, 7), 2):
        if (a + b) % 4 != 0:
            continue
        det = chiF * chiF * zeta_pow(3 * (a + b))
        if det != CycInt(2) ** n:
            continue
        tr = chiF * (zeta_pow(3 * a) + zeta_pow(3 * b))
        if reduce_mod3(tr) == F9Elem(t) and reduce_mod3(det) == reduce_mod3(CycInt(2) ** n):
            out.append({a, b})
    return out


def test_select_character_pair_brute_force_equivalence():
    for n in (1, 3, 5):
        for t in (1, 2):
            winners = brute_force_pair(n, t)
            assert len(winners) == 1
            assert select_character_pair(n, t) == winners[0]


def test_synth_p2_c_values():
    rep = synth_p2_c(1, 1)
    assert rep.aux["pair"] == [1, 3]
    assert rep.frob_matrix.trace() == CycInt(-2)
    assert rep.frob_matrix.det() == CycInt(2)
    sigma = rep.inertia_gens[0][1]
    assert sigma ** 2 == -Mat2.identity()
    assert sigma.order() == 4
    # the paper's labeled value: psi(g) = zeta8^3 = (-sqrt2 + sqrt(-2))/2
    from wildrep.cyc24 import SQRT2, ZETA8

    assert ZETA8 ** 3 == (SQRTM2 - SQRT2).divide_exact(2)


def test_p2c_pipeline_consistency():
    r = run(Q2, [0, 1, 0, 1, -3])
    rep = r.rep
    assert rep.case_tag == "p2c"
    t = rep.aux["mod3_trace"]
    assert reduce_mod3(rep.frob_matrix.trace()) == F9Elem(t)
    vr = verify(rep, r.mod3_rep)
    assert vr.all_passed


def test_p2_C2_twist_case():
    r = run(Q2, [0, 0, 0, 0, 2])
    rep = r.rep
    assert rep.case_tag == "p2C2twist"
    assert rep.aux["point_count"] == 3 and rep.aux["a"] == 0
    # char poly x^2 + 2
    assert rep.frob_matrix.trace() == CycInt(0)
    assert rep.frob_matrix.det() == CycInt(2)
    tau = rep.inertia_gens[0][1]
    assert tau == -Mat2.identity()
    vr = verify(rep, r.mod3_rep)
    assert vr.all_passed


def test_p2_C6_partial():
    r = run(Q2, [0, 0, 0, 0, 3])
    assert r.rep is None
    assert r.partial["case_tag"] == "p2C6partial"
    assert r.partial["out_of_scope"] == "TameFactor"
    assert r.partial["twisted_classification"] == "TameCyclic(3)"
    assert r.partial["eta"]["kind"] == "ramified"


def test_evaluate_words():
    r = run(Q3, [0, 0, 0, 6, 1])
    rep = r.rep
    sm, tr, det = evaluate(rep, [])
    assert tr == (CycInt(2), 0)
    sm, tr, det = evaluate(rep, ["sigma", "sigma", "sigma"])
    assert sm.mat == Mat2.identity()
    sm, tr, det = evaluate(rep, ["Frob", "Frob^-1"])
    assert sm.mat == Mat2.scalar(CycInt(3))  # Id * 3 / 3^1
    assert sm.denom_exp == 1
    with pytest.raises(UnknownGenerator):
        evaluate(rep, ["nope"])


def test_verify_catches_corruption():
    r = run(Q3, [0, 0, 0, 6, 4])
    rep = r.rep
    rep.frob_matrix = rep.frob_matrix * CycInt(2)
    vr = verify(rep, None)
    names = {n: ok for (n, ok, _d) in vr.checks}
    assert names["det_frobenius"] is False


def test_conjugate_symmetry():
    # conjugating every entry swaps the two diagonal summands; traces invariant
    for coeffs in ([0, 0, 0, 6, 1], [0, 0, 0, 54, 27]):
        r = run(Q3, coeffs)
        rep = r.rep
        cf = rep.frob_matrix.conj()
        assert cf.trace() == rep.frob_matrix.trace()
        assert cf.det() == rep.frob_matrix.det()
        # for the diagonal cases the conjugate equals the basis swap
        M = rep.frob_matrix
        swapped = Mat2(M.d, M.c, M.b, M.a)
        assert cf == swapped


def test_dets_and_inertia_orders_all_cases():
    cases = [
        (Q3, [0, 0, 0, 6, 4], 3),
        (Q3, [0, 0, 0, 6, 1], 3),
        (Q3, [0, 0, 0, 54, 27], 3),
        (Q2, [0, 0, 0, 0, 2], 2),
        (Q2, [0, 1, 0, 1, -3], 2),
        (Q2, [0, 1, 0, -3, 1], 2),
    ]
    for F, coeffs, p in cases:
        r = run(F, coeffs)
        rep = r.rep
        assert rep.frob_matrix.det() == CycInt(p) ** F.f_abs
        got = group_order([m for (_l, m, _o) in rep.inertia_gens])
        assert got == rep.inertia_order_expected()
