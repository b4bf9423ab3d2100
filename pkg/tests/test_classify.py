import pytest

from wildrep.padic import PadicError, make_unramified, valuation
from wildrep.curve import WeierstrassModel, quadratic_twist, tate_algorithm
from wildrep.classify import (
    SQUARE_DIFFERENCE_SCAN,
    classify_G,
    inertia_image,
    potentially_good,
    square_class_representatives,
    three_torsion_field,
    twist_search_p2,
    two_torsion_data,
)

Q2 = make_unramified(2, 1, 60)
Q3 = make_unramified(3, 1, 60)


def model(F, coeffs):
    return WeierstrassModel(F, *coeffs)


def test_potentially_good_examples():
    assert potentially_good(model(Q2, [0, 0, 1, 0, 0]))  # j = 0
    assert not potentially_good(model(Q2, [1, 0, 0, 0, 2]))  # v(j) = -1
    assert potentially_good(model(Q3, [0, 0, 0, 6, 1]))


def test_inertia_image_p3_examples():
    cls, nd = inertia_image(model(Q3, [0, 0, 0, 6, 4]), Q3)
    assert cls.tag == "WildC3"
    assert cls.evidence["v_delta_mod4"] == 0
    assert not cls.evidence["two_torsion_over_unramified"]
    cls, _ = inertia_image(model(Q3, [0, 0, 0, 54, 27]), Q3)
    assert cls.tag == "WildC6"
    cls, _ = inertia_image(model(Q2, [0, 0, 1, 0, 0]), Q2)
    assert cls.tag == "Good"


def test_inertia_image_p3_tame_routes():
    cls, _ = inertia_image(model(Q3, [0, 0, 0, -9, 0]), Q3)
    assert cls.label() == "TameCyclic(2)"
    assert cls.evidence["kodaira_type"] == "I0*"
    cls, _ = inertia_image(model(Q3, [0, 0, 0, -3, 0]), Q3)
    assert cls.label() == "TameCyclic(4)"


def test_inertia_image_multiplicative():
    cls, _ = inertia_image(model(Q2, [1, 0, 0, 0, 2]), Q2)
    assert cls.tag == "PotentiallyMultiplicative"
    assert cls.evidence["v_j"] == -1


def test_two_torsion_data_examples():
    td = two_torsion_data(model(Q3, [0, 0, 0, 6, 1]), Q3)
    assert td.degree_KE2 == 3
    assert td.square_difference is not None
    i, j, wit = td.square_difference
    delta = td.roots[i - 1] - td.roots[j - 1]
    F = td.field_F
    assert F.eq(wit * wit, delta)
    td = two_torsion_data(model(Q3, [0, 0, 0, 6, 4]), Q3)
    assert td.degree_KE2 == 6


def test_square_difference_scan_order_fixed():
    assert SQUARE_DIFFERENCE_SCAN == [(2, 1), (3, 1), (3, 2), (1, 2), (1, 3), (2, 3)]


def test_no_square_difference_requires_even_degree():
    # over Q9 with generator coefficients: the (b.ii) configuration
    Q9 = make_unramified(3, 2, 60)
    w = Q9.gen()
    E = WeierstrassModel(Q9, 0, 0, 0, 6 * w, 1 + w)
    cls, nd = inertia_image(E, Q9)
    assert cls.tag == "WildC3"
    td = two_torsion_data(nd.minimal_model, Q9)
    assert td.degree_KE2 == 3
    assert td.square_difference is None


def test_twist_coherence_p3():
    # twisting by pi flips WildC3 <-> WildC6; unit-square twists preserve tags
    for coeffs in ([0, 0, 0, 6, 4], [0, 0, 0, 6, 1]):
        E = model(Q3, coeffs)
        cls, _ = inertia_image(E, Q3)
        assert cls.tag == "WildC3"
        cls2, _ = inertia_image(quadratic_twist(E, Q3.from_int(3)), Q3)
        assert cls2.tag == "WildC6"
        cls3, _ = inertia_image(quadratic_twist(E, Q3.from_int(16)), Q3)
        assert cls3.tag == "WildC3"
    E = model(Q3, [0, 0, 0, 54, 27])
    cls, _ = inertia_image(E, Q3)
    assert cls.tag == "WildC6"
    cls2, _ = inertia_image(quadratic_twist(E, Q3.from_int(3)), Q3)
    assert cls2.tag == "WildC3"


def test_wild_p3_has_even_v_delta():
    for coeffs in ([0, 0, 0, 6, 4], [0, 0, 0, 6, 1], [0, 0, 0, 54, 27], [0, 0, 0, 9, 9]):
        cls, nd = inertia_image(model(Q3, coeffs), Q3)
        assert cls.tag in ("WildC3", "WildC6")
        assert nd.v_delta_min % 2 == 0


def test_p2_classification_by_torsion_field():
    cls, _ = inertia_image(model(Q2, [0, 1, 0, 4, 4]), Q2)
    assert cls.label() == "TameCyclic(3)"
    cls, _ = inertia_image(model(Q2, [0, 0, 0, 0, 2]), Q2)
    assert cls.tag == "WildC2"
    cls, _ = inertia_image(model(Q2, [0, 0, 0, 0, 3]), Q2)
    assert cls.tag == "WildC6"
    cls, _ = inertia_image(model(Q2, [0, 1, 0, 1, -3]), Q2)
    assert cls.tag == "WildC4"
    assert cls.evidence["torsion_field_e"] == 4


def test_p2_wild_c4_has_e_4():
    for coeffs in ([0, 1, 0, 1, -3], [0, 1, 0, -3, 1]):
        cls, _ = inertia_image(model(Q2, coeffs), Q2)
        assert cls.tag == "WildC4"
        td = cls.evidence["three_torsion"]
        assert td.e == 4


def test_classify_G_parity_and_names():
    cls, _ = inertia_image(model(Q2, [0, 1, 0, 1, -3]), Q2)
    td = classify_G(cls.evidence["three_torsion"], Q2, 1)
    assert td.G_name == "C8" and td.degree == 8
    cls, _ = inertia_image(model(Q2, [0, 1, 0, -3, 1]), Q2)
    td = classify_G(cls.evidence["three_torsion"], Q2, 1)
    assert td.G_name == "D4" and td.degree == 8
    Q4 = make_unramified(2, 2, 60)
    cls, _ = inertia_image(model(Q4, [0, 1, 0, 1, -3]), Q4)
    td = classify_G(cls.evidence["three_torsion"], Q4, 2)
    assert td.G_name == "C4" and td.degree == 4


def test_nonabelian_detection():
    cls, _ = inertia_image(model(Q2, [0, 0, 0, -1, 0]), Q2)
    assert cls.label() == "NonAbelian(Q8)"
    assert cls.evidence["torsion_field_e"] == 8


def test_square_class_representatives_q2():
    reps = square_class_representatives(Q2)
    # 7 nontrivial classes of Q2^*/(Q2^*)^2: one unramified, six ramified
    assert len(reps) == 7
    ram = [r for r in reps if r[2]]
    assert len(ram) == 6
    unram = [r for r in reps if not r[2]]
    assert len(unram) == 1


def test_twist_search_good_roundtrip():
    # twist a good curve by 2: the search recovers the class of 2
    E0 = model(Q2, [0, 0, 1, 0, 0])
    Et = quadratic_twist(E0, Q2.from_int(2))
    cls, nd = inertia_image(Et, Q2)
    assert cls.tag == "WildC2"
    tw = twist_search_p2(nd.minimal_model, Q2, cls)
    assert tw.outcome == "GoodAfterTwist"
    d = tw.d_elem
    assert valuation(d) == 1  # same ramified square class as 2
    ndt = tate_algorithm(tw.twisted)
    assert ndt.v_delta_min == 0


def test_twist_search_c6_outcome():
    E = model(Q2, [0, 0, 0, 0, 3])
    cls, nd = inertia_image(E, Q2)
    assert cls.tag == "WildC6"
    tw = twist_search_p2(nd.minimal_model, Q2, cls)
    assert tw.outcome == "TameAfterTwist"
    cls2, _ = inertia_image(tw.twisted, Q2)
    assert cls2.label() == "TameCyclic(3)"


def test_twist_search_returns_small_valuation_d():
    E = model(Q2, [0, 0, 0, 0, 2])
    cls, nd = inertia_image(E, Q2)
    tw = twist_search_p2(nd.minimal_model, Q2, cls)
    assert valuation(tw.d_elem) in (0, 1)


def test_three_torsion_points_count():
    td = three_torsion_field(model(Q2, [0, 0, 1, 0, 0]), Q2)
    assert len(td.points) == 8
    assert td.degree == 2 and td.e == 1
