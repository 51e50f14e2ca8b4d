from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from geodesica.errors import DivisionByZero
from geodesica.numfield import (
    NumberField,
    contains_obvious_subfield_flags,
    is_algebraic_integer,
    minimal_polynomial,
    nf_inverse,
)
from geodesica.polycore import RatPoly

K74 = NumberField(RatPoly([1, 4, -4, 1]), "Q(z_74)")
K73 = NumberField(RatPoly([1, 5, -6, -4, 9, -5, 1]), "Q(z_73)")


class TestInverse:
    def test_gen_inverse(self):
        z = K74.gen()
        assert nf_inverse(z) == K74.element([-4, 4, -1])
        assert z * nf_inverse(z) == K74.one()

    def test_one(self):
        assert nf_inverse(K74.one()) == K74.one()

    def test_quadratic_element(self):
        z = K74.gen()
        e = z * z - 3 * z + 2
        expected = K74.element([Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2)])
        assert nf_inverse(e) == expected

    def test_zero_raises(self):
        with pytest.raises(DivisionByZero):
            nf_inverse(K74.zero())


coeff3 = st.lists(
    st.fractions(min_value=-4, max_value=4, max_denominator=4),
    min_size=3, max_size=3,
)


@given(coeff3, coeff3, coeff3)
@settings(max_examples=50, deadline=None)
def test_field_axioms(a, b, c):
    x, y, w = K74.element(a), K74.element(b), K74.element(c)
    assert (x + y) * w == x * w + y * w
    assert (x * y) * w == x * (y * w)
    assert x + (-x) == K74.zero()
    if not x.is_zero():
        assert x * nf_inverse(x) == K74.one()


@given(coeff3)
@settings(max_examples=30, deadline=None)
def test_minimal_polynomial_annihilates(a):
    e = K74.element(a)
    m = minimal_polynomial(e)
    # evaluate m at e inside the field
    acc = K74.zero()
    for coeff in reversed(m.coeffs):
        acc = acc * e + K74.rational(coeff)
    assert acc.is_zero()


class TestMinimalPolynomial:
    def test_generator(self):
        assert minimal_polynomial(K74.gen()) == K74.minpoly

    def test_rational(self):
        assert minimal_polynomial(K74.rational(Fraction(5, 2))) == RatPoly(
            [Fraction(-5, 2), 1]
        )

    def test_half_generator(self):
        e = K74.element([0, Fraction(1, 2)])
        assert minimal_polynomial(e) == RatPoly([Fraction(1, 8), 1, -2, 1])


class TestAlgebraicIntegers:
    def test_generator(self):
        assert is_algebraic_integer(K74.gen())

    def test_inverse_of_generator(self):
        # 1/z = -z^2 + 4z - 4 is an integer combination here
        assert is_algebraic_integer(nf_inverse(K74.gen()))

    def test_half_generator_is_not(self):
        assert not is_algebraic_integer(K74.element([0, Fraction(1, 2)]))


def test_remark_conjugation_identity():
    # the structural identity behind the surface-subgroup entry pattern
    z = K74.gen()
    assert (z * z - 3 * z + 2) * (z * z - z - 1) == K74.rational(-2)


class TestEmbedding:
    def test_rational_exact(self):
        place = K74.real_places()[0]
        v = place.embed(K74.rational(Fraction(7, 3)), 64)
        assert float(v.delta.b) < 1e-15

    def test_generator_in_unit_interval(self):
        place = K74.real_places()[0]
        v = place.embed(K74.gen(), 64)
        assert -1 < float(v.a) and float(v.b) < 0

    def test_homomorphism(self):
        place = K74.real_places()[0]
        z = K74.gen()
        a = place.embed(z + 2, 80)
        b = place.embed(z * z - 1, 80)
        ab = place.embed((z + 2) * (z * z - 1), 80)
        prod = a * b
        assert prod.a <= ab.mid <= prod.b or abs(float(prod.mid - ab.mid)) < 1e-18

    def test_radius_shrinks_with_precision(self):
        place = K73.real_places()[0]
        w64 = float(place.embed(K73.gen(), 64).delta.b)
        w256 = float(place.embed(K73.gen(), 256).delta.b)
        assert w256 < w64

    def test_places_ordered_ascending(self):
        places = K73.real_places()
        assert len(places) == 2
        v0 = place_mid(places[0])
        v1 = place_mid(places[1])
        assert v0 < v1


def place_mid(place):
    return float(place.embed(place.field.gen(), 64).mid.a)


class TestSubfieldFlags:
    def test_cubic_certified(self):
        rec = contains_obvious_subfield_flags(K74)
        assert rec["degree_odd_prime"] and rec["certified"]
        assert rec["no_proper_real_subfield"] is True

    def test_degree_seven_certified(self):
        K = NumberField(RatPoly([-1, 7, -5, 7, -3, 5, -1, 1]))
        rec = contains_obvious_subfield_flags(K)
        assert rec["certified"]

    def test_even_degree_needs_flag(self):
        rec = contains_obvious_subfield_flags(K73)
        assert not rec["certified"]
        assert rec["no_proper_real_subfield"] is None
        rec2 = contains_obvious_subfield_flags(
            K73, {"no_real_subfield": True, "no_quadratic_subfield": True}
        )
        assert rec2["no_proper_real_subfield"] is True
        assert not rec2["certified"]

    def test_flagged_quadratic_subfield(self):
        # the one even-degree exception in the data: contains a real quadratic
        K = NumberField(RatPoly([-1, 2, -1, -2, 1]))
        rec = contains_obvious_subfield_flags(K, {"no_real_subfield": False})
        assert rec["no_proper_real_subfield"] is False
