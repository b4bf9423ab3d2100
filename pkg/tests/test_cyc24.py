import random

import pytest

from wildrep.cyc24 import (
    CycInt,
    F9Elem,
    I,
    ONE,
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


def rand_cyc(rng, height=1000):
    return CycInt([rng.randint(-height, height) for _ in range(8)])


def test_cube_roots_sum_to_minus_one():
    assert ZETA3 + ZETA3 * ZETA3 == CycInt(-1)


def test_conj_of_zeta8_cubed():
    assert zeta_pow(9).conj() == zeta_pow(-9)
    # zeta8^3 conjugates to zeta8^5
    assert (ZETA8 ** 3).conj() == ZETA8 ** 5


def test_sqrtm2_squares_to_minus_two():
    assert SQRTM2 * SQRTM2 == CycInt(-2)


def test_constants_square_to_expected_integers():
    cs = constants()
    assert cs["sqrt2"] ** 2 == CycInt(2)
    assert cs["sqrt3"] ** 2 == CycInt(3)
    assert cs["sqrtm2"] ** 2 == CycInt(-2)
    assert cs["sqrtm3"] ** 2 == CycInt(-3)
    assert cs["i"] ** 2 == CycInt(-1)
    assert cs["zeta3"] ** 3 == ONE
    assert cs["zeta8"] ** 8 == ONE


def test_zeta3_is_half_of_minus_one_minus_sqrtm3():
    # (-1 - sqrt(-3))/2 is an algebraic integer, equal to zeta3^2
    val = (CycInt(-1) - SQRTM3).divide_exact(2)
    assert val == ZETA3 * ZETA3


def test_zeta_order():
    z = zeta_pow(1)
    for k in range(1, 25):
        if 24 % k == 0 and k < 24:
            assert z ** k != ONE
    assert z ** 24 == ONE
    for k in range(1, 49):
        assert (zeta_pow(k) == ONE) == (k % 24 == 0)


def test_embed_values():
    assert abs(embed_complex(SQRT2) - 1.4142135623730951) < 1e-12
    v = embed_complex(ZETA8 ** 3)
    assert abs(v - complex(-0.7071067811865475, 0.7071067811865476)) < 1e-12
    assert abs(embed_complex(CycInt(-1)) - (-1.0)) < 1e-15


def test_ring_properties_random():
    rng = random.Random(2024)
    for _ in range(1000):
        a, b, c = (rand_cyc(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a * b).conj() == a.conj() * b.conj()
        assert (a + b).conj() == a.conj() + b.conj()
        assert a.conj().conj() == a


def test_embed_is_approx_homomorphism():
    rng = random.Random(7)
    for _ in range(1000):
        a, b = rand_cyc(rng), rand_cyc(rng)
        assert abs(embed_complex(a * b) - embed_complex(a) * embed_complex(b)) < 1e-9 * (
            1 + abs(embed_complex(a)) * abs(embed_complex(b))
        )
        assert abs(embed_complex(a + b) - (embed_complex(a) + embed_complex(b))) < 1e-9


def test_reduce_mod3_simple_values():
    assert reduce_mod3(CycInt(3)) == F9Elem(0)
    assert reduce_mod3(CycInt(-2)) == F9Elem(1)
    assert reduce_mod3(I).order() == 4


def test_reduce_mod3_is_ring_morphism():
    rng = random.Random(99)
    for _ in range(1000):
        a, b = rand_cyc(rng), rand_cyc(rng)
        assert reduce_mod3(a * b) == reduce_mod3(a) * reduce_mod3(b)
        assert reduce_mod3(a + b) == reduce_mod3(a) + reduce_mod3(b)
    assert reduce_mod3(CycInt(3) * rand_cyc(rng)) == F9Elem(0)


def test_reduce_mod3_respects_defining_relation():
    # image of zeta24 satisfies x^8 - x^4 + 1 = 0 in F9
    u = reduce_mod3(zeta_pow(1))
    assert u ** 8 - u ** 4 + F9Elem(1) == F9Elem(0)
    # and satisfies the chosen factor x^2 + x + 2
    assert u * u + u + F9Elem(2) == F9Elem(0)


def test_f9_multiplicative_group_cyclic_of_order_8():
    elems = [F9Elem(a, b) for a in range(3) for b in range(3) if a or b]
    orders = sorted(e.order() for e in elems)
    assert orders == [1, 2, 4, 4, 8, 8, 8, 8]


def test_divide_exact_raises_on_non_divisible():
    with pytest.raises(ValueError):
        ONE.divide_exact(2)


def test_serialization_order_is_little_endian_powers():
    x = zeta_pow(2) + CycInt(5)
    assert x.coeff_vector() == [5, 0, 1, 0, 0, 0, 0, 0]
