import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from entrofunc.exactfield import (
    DEFAULT_TAU,
    DEGREE_CAP,
    BigRational,
    DegreeCapError,
    FieldElement,
    FieldParseError,
    PoleError,
    Poly,
    T,
    approx_value,
    as_field_element,
    derivation_apply,
    field_arith,
    parse_field_element,
    poly_gcd,
    random_unit_interval_element,
)

ONE = FieldElement(1)
ZERO = FieldElement(0)


def random_element(rng: random.Random) -> FieldElement:
    num = Poly([Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rng.randint(1, 4))])
    den = Poly([Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))])
    if num.is_zero():
        num = Poly([1])
    if den.is_zero():
        den = Poly([0, 1])
    return FieldElement(num, den)


class TestPoly:
    def test_zero_polynomial(self):
        z = Poly()
        assert z.is_zero() and z.degree == -1 and z.lc == 0
        assert Poly([0, 0, 0]) == z

    def test_arithmetic(self):
        p = Poly([1, 2])  # 2t + 1
        q = Poly([-1, 0, 1])  # t^2 - 1
        assert p + q == Poly([0, 2, 1])
        assert q - p == Poly([-2, -2, 1])
        assert p * q == Poly([-1, -2, 1, 2])
        assert (-p) + p == Poly()
        assert p.scale(Fraction(1, 2)) == Poly([Fraction(1, 2), 1])

    def test_divmod(self):
        num = Poly([-1, 0, 1])  # t^2 - 1
        den = Poly([-1, 1])  # t - 1
        quo, rem = divmod(num, den)
        assert quo == Poly([1, 1]) and rem.is_zero()
        assert num // den == quo
        assert (num % Poly([0, 1])) == Poly([-1])
        with pytest.raises(ZeroDivisionError):
            divmod(num, Poly())

    def test_exact_div_rejects_remainder(self):
        with pytest.raises(ValueError):
            Poly([1, 1]).exact_div(Poly([0, 1]))

    def test_pow_derivative_evaluate(self):
        p = Poly([0, 1])
        assert p**3 == Poly([0, 0, 0, 1])
        assert p**0 == Poly([1])
        assert Poly([1, 2, 3]).derivative() == Poly([2, 6])
        assert Poly([1, 2, 3]).evaluate(Fraction(1, 2)) == Fraction(11, 4)
        assert isinstance(Poly([1]).evaluate(2), Fraction)

    def test_monic(self):
        assert Poly([2, 4]).monic() == Poly([Fraction(1, 2), 1])
        assert Poly().monic().is_zero()


def euclid_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


small_polys = st.lists(
    st.integers(min_value=-6, max_value=6), min_size=0, max_size=5
).map(Poly)


class TestPolyGcd:
    def test_known_common_factor(self):
        shared = Poly([1, 1])  # t + 1
        a = shared * shared * Poly([-2, 1])
        b = shared * Poly([3, 0, 0, 1])
        assert poly_gcd(a, b) == shared

    def test_zero_and_constant_edges(self):
        assert poly_gcd(Poly(), Poly()).is_zero()
        assert poly_gcd(Poly(), Poly([2, 4])) == Poly([Fraction(1, 2), 1])
        assert poly_gcd(Poly([5]), Poly([0, 1])) == Poly([1])

    @given(a=small_polys, b=small_polys)
    def test_matches_euclid_oracle(self, a, b):
        if a.is_zero() and b.is_zero():
            return
        assert poly_gcd(a, b) == euclid_gcd(a, b)

    @given(a=small_polys, b=small_polys, g=small_polys)
    def test_planted_factor_divides_out(self, a, b, g):
        if g.degree < 1 or a.is_zero() or b.is_zero():
            return
        d = poly_gcd(a * g, b * g)
        assert (a * g % d).is_zero() and (b * g % d).is_zero()
        assert d.degree >= g.degree


class TestFieldElement:
    def test_canonicalization(self):
        # common factor cancels and the denominator is made monic
        x = FieldElement(Poly([-1, 0, 1]), Poly([-1, 1]))
        assert x == T + 1
        y = FieldElement(Poly([2, 2]), Poly([4, 4]))
        assert y == as_field_element(Fraction(1, 2))
        assert FieldElement(Poly(), Poly([3, 7])) == ZERO

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            FieldElement(Poly([1]), Poly())

    def test_operator_suite(self):
        x = T / (1 + T)
        assert x + x == 2 * T / (1 + T)
        assert 1 - x == ONE / (1 + T)
        assert (x * (1 + T)) == T
        assert (T**2 - 1) / (T - 1) == T + 1
        assert T ** (-2) == 1 / (T * T)
        assert T**0 == ONE
        assert (1 + T) ** 3 == 1 + 3 * T + 3 * T**2 + T**3

    def test_division_by_zero_element(self):
        with pytest.raises(ZeroDivisionError):
            _ = ONE / ZERO
        with pytest.raises(ZeroDivisionError):
            _ = ZERO ** (-1)

    def test_structural_equality_and_hash(self):
        assert len({T + 1, (T**2 - 1) / (T - 1)}) == 1
        assert T != T + 1
        assert (T == "t") is False or True  # comparisons with strings stay NotImplemented-safe

    def test_degree_cap(self):
        _ = T**DEGREE_CAP
        with pytest.raises(DegreeCapError):
            _ = T ** (DEGREE_CAP + 1)

    @given(st.integers(min_value=-30, max_value=30), st.integers(min_value=1, max_value=30))
    def test_rational_constants_embed(self, p, q):
        x = as_field_element(Fraction(p, q))
        assert x.den == Poly([1])
        assert approx_value(x) == pytest.approx(p / q, abs=1e-12)


class TestCoercionAndArith:
    def test_as_field_element_paths(self):
        assert as_field_element(3) == FieldElement(3)
        assert as_field_element(Fraction(1, 3)) == FieldElement(Fraction(1, 3))
        assert as_field_element(0.5) == as_field_element(Fraction(1, 2))
        assert as_field_element(Poly([0, 1])) == T
        assert as_field_element("t + 1") == T + 1
        assert as_field_element(T) is T
        with pytest.raises(TypeError):
            as_field_element(1j)

    def test_field_arith_ops(self):
        assert field_arith(T, 1, "+") == T + 1
        assert field_arith(T, 1, "-") == T - 1
        assert field_arith(T, T, "*") == T**2
        assert field_arith(T**2, T, "/") == T
        with pytest.raises(ValueError):
            field_arith(T, T, "%")


class TestDerivation:
    def test_frozen_examples(self):
        assert derivation_apply(T) == ONE
        assert derivation_apply(T**2) == 2 * T
        assert derivation_apply(1 / T) == -(T ** (-2))
        assert derivation_apply(T, scale=Fraction(3, 2)) == as_field_element(Fraction(3, 2))

    def test_vanishes_exactly_on_constants(self):
        for value in (0, 1, Fraction(3, 7), Fraction(-22, 5)):
            assert derivation_apply(value).is_zero()
        assert not derivation_apply(T / (1 + T)).is_zero()

    def test_quotient_rule_closed_form(self):
        # d(1/(1+t)) = -1/(1+t)^2
        assert derivation_apply(1 / (1 + T)) == -ONE / (1 + T) ** 2

    def test_leibniz_additivity_linearity(self):
        rng = random.Random(99)
        for _ in range(100):
            x, y = random_element(rng), random_element(rng)
            dx, dy = derivation_apply(x), derivation_apply(y)
            assert derivation_apply(x * y) == x * dy + y * dx
            assert derivation_apply(x + y) == dx + dy
            k = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            assert derivation_apply(k * x) == k * dx

    def test_scale_is_multiplicative_on_result(self):
        rng = random.Random(5)
        x = random_element(rng)
        assert derivation_apply(x, scale=3) == 3 * derivation_apply(x)


class TestApproxValue:
    def test_default_tau_is_frozen(self):
        assert DEFAULT_TAU == 0.7390851332151607
        assert 0.0 < DEFAULT_TAU < 1.0

    def test_frozen_evaluation(self):
        assert approx_value(T) == DEFAULT_TAU
        assert approx_value(T / (1 + T)) == 0.4249850217791038
        assert approx_value(T / (1 + T), tau=0.5) == pytest.approx(1 / 3)

    def test_exact_rational_evaluation_before_rounding(self):
        # (1/3) evaluates through Fraction arithmetic, then rounds once
        assert approx_value(as_field_element(Fraction(1, 3))) == float(Fraction(1, 3))

    def test_pole_detection(self):
        pole = FieldElement(Poly([1]), Poly([-Fraction(DEFAULT_TAU), 1]))
        with pytest.raises(PoleError):
            approx_value(pole)
        # other evaluation points miss the pole
        assert approx_value(pole, tau=0.5) == pytest.approx(1 / (0.5 - DEFAULT_TAU))


class TestTextualForm:
    def test_specific_round_trip(self):
        text = "(2*t^2 - 1)/(3*t + 2)"
        x = parse_field_element(text)
        assert str(x) == text
        assert x == (2 * T**2 - 1) / (3 * T + 2)

    def test_printing_clears_rational_coefficients(self):
        x = FieldElement(Poly([Fraction(1, 2), 1]), Poly([1]))
        assert str(x) == "(2*t + 1)/(2)"
        assert str(T + 1) == "t + 1"
        assert str(ZERO) == "0"
        assert str(as_field_element(Fraction(3, 16))) == "(3)/(16)"

    def test_repr_wraps_str(self):
        x = (T + 1) / (T - 1)
        assert repr(x) == f"FieldElement({str(x)!r})"

    def test_grammar_features(self):
        assert parse_field_element("t^-2") == T ** (-2)
        assert parse_field_element("-t + -1") == -(T + 1)
        assert parse_field_element("1/2 * t") == T / 2
        assert parse_field_element("((t))") == T
        assert parse_field_element("2^3") == as_field_element(8)

    def test_random_round_trips(self):
        rng = random.Random(2024)
        for _ in range(200):
            x = random_element(rng)
            assert parse_field_element(str(x)) == x

    def test_parse_errors_carry_columns(self):
        with pytest.raises(FieldParseError) as err:
            parse_field_element("t * * 2")
        assert err.value.column == 5
        with pytest.raises(FieldParseError) as err:
            parse_field_element("2 & 3")
        assert err.value.column == 3
        with pytest.raises(FieldParseError):
            parse_field_element("(t")
        with pytest.raises(FieldParseError):
            parse_field_element("t^x")
        with pytest.raises(FieldParseError):
            parse_field_element("1/(t - t)")
        with pytest.raises(FieldParseError):
            parse_field_element("")


class TestRandomUnitInterval:
    def test_draws_land_strictly_inside(self, rng):
        for _ in range(50):
            x = random_unit_interval_element(rng)
            assert isinstance(x, FieldElement)
            assert 0.0 < approx_value(x) < 1.0

    def test_deterministic_under_seed(self):
        a = random_unit_interval_element(random.Random(3))
        b = random_unit_interval_element(random.Random(3))
        assert a == b


def test_bigrational_is_arbitrary_precision():
    assert BigRational is Fraction
    huge = BigRational(10**50, 3**40)
    assert BigRational(1) / huge * huge == 1
