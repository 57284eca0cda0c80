from fractions import Fraction

import numpy as np
import pytest

from entrofunc.exactfield import T, as_field_element, random_unit_interval_element
from entrofunc.families import (
    CUSTOM_REGISTRY,
    DomainError,
    ExactDerivationAffine,
    PowerAffine,
    XLogX,
)
from entrofunc.equations import DomainDn, eq1_residual
from entrofunc.cocycle import (
    BranchMismatchError,
    CocycleMap,
    cf_map,
    check_cocycle_system,
    ng_decomposition_check,
    rf_map,
    substitution_forward,
    substitution_inverse,
)

SQUARE = CUSTOM_REGISTRY["custom-square"]

PRODUCT = CocycleMap(lambda u, v: u * v)
PRODUCT_SQUARED = CocycleMap(lambda u, v: (u * v) ** 2)

D2 = DomainDn.uniform(2, 14)
D3 = DomainDn.uniform(3, 9)


class TestMaps:
    def test_provenance_tags(self):
        assert PRODUCT.provenance == "custom"
        assert cf_map(SQUARE).provenance == "derived-from-f"
        assert rf_map(SQUARE, 1.0).provenance == "derived-from-f"

    def test_frozen_values_for_square(self):
        C = cf_map(SQUARE)
        R = rf_map(SQUARE, 1.0)
        assert C(0.25, 0.25) == pytest.approx(-0.125, abs=1e-15)
        assert R(0.25, 0.25) == pytest.approx(0.25, abs=1e-15)

    def test_solution_families_make_both_maps_agree(self):
        fam = PowerAffine(c_star=3.0, c=-3.0, q=0.5)
        C, R = cf_map(fam), rf_map(fam, 0.5)
        for u, v in ((0.1, 0.2), (0.3, 0.45), (0.05, 0.9)):
            assert C(u, v) == pytest.approx(R(u, v), abs=1e-13)

    def test_exact_maps_for_the_derivation_solution(self, rng):
        fam = ExactDerivationAffine(c_star=0, scale=1)
        C, R = cf_map(fam), rf_map(fam, 1)
        u = random_unit_interval_element(rng) / 2
        v = random_unit_interval_element(rng) / 2
        assert C(u, v).is_zero()
        assert R(u, v).is_zero()

    def test_exact_r_map_requires_integer_exponent(self):
        R = rf_map(ExactDerivationAffine(c_star=0, scale=1), 0.5)
        with pytest.raises(ValueError, match="integer q"):
            R(as_field_element(Fraction(1, 4)), as_field_element(Fraction(1, 4)))

    def test_residual_transport_under_substitution(self):
        # eq1 residual at (x, y) equals (C_f - R_f) at (xy, (1-x)y)
        for x, y in ((0.3, 0.6), (0.7, 0.4)):
            u, v = substitution_inverse(x, y)
            C, R = cf_map(SQUARE), rf_map(SQUARE, 2.0)
            assert eq1_residual(SQUARE, x, y, q=2.0) == pytest.approx(
                C(u, v) - R(u, v), abs=1e-14
            )


class TestSubstitution:
    def test_frozen_example_and_roundtrip(self):
        assert substitution_inverse(1 / 3, 3 / 4) == pytest.approx((1 / 4, 1 / 2))
        assert substitution_forward(1 / 4, 1 / 2) == pytest.approx((1 / 3, 3 / 4))

    def test_exact_roundtrip_is_structural(self):
        x = T / (1 + T)
        y = as_field_element(Fraction(2, 3))
        u, v = substitution_inverse(x, y)
        xx, yy = substitution_forward(u, v)
        assert xx == x and yy == y

    def test_domain_validation(self):
        with pytest.raises(DomainError):
            substitution_forward(0.6, 0.5)  # u + v leaves ]0,1[
        with pytest.raises(DomainError):
            substitution_forward(0.0, 0.5)
        with pytest.raises(DomainError):
            substitution_inverse(1.0, 0.5)  # x must be interior
        with pytest.raises(DomainError):
            substitution_inverse(0.5, 0.0)


class TestCocycleSystem:
    def test_product_map_is_a_two_homogeneous_cocycle(self):
        # uv satisfies symmetry and the cocycle identity exactly and is
        # 2-homogeneous, so the full system passes at q=2 ...
        rep = check_cocycle_system(PRODUCT, 2.0, D2, D3)
        assert rep.symmetry.verdict == "pass"
        assert rep.cocycle.verdict == "pass"
        assert rep.homogeneity.verdict == "pass"
        assert rep.verdict == "pass"

    def test_product_map_fails_other_homogeneity_degrees(self):
        # ... and fails only the homogeneity leg at q=1
        rep = check_cocycle_system(PRODUCT, 1.0, D2, D3)
        assert rep.cocycle.verdict == "pass"
        assert rep.homogeneity.verdict == "fail"
        assert rep.verdict == "fail"
        assert len(rep.homogeneity.witness) == 3
        assert rep.max_abs_residual == rep.homogeneity.max_abs_residual
        assert rep.witness == rep.homogeneity.witness

    def test_squared_product_fails_the_identity_off_diagonal(self):
        rep = check_cocycle_system(PRODUCT_SQUARED, 4.0, D2, D3)
        assert rep.symmetry.verdict == "pass"
        assert rep.homogeneity.verdict == "pass"  # (uv)^2 is 4-homogeneous
        assert rep.cocycle.verdict == "fail"
        assert len(rep.cocycle.witness) == 3

    def test_diagonal_points_cannot_expose_the_failure(self):
        # any symmetric G satisfies the identity on the diagonal, so the D3
        # grid must contain off-diagonal triples to have any power
        def identity_residual(G, x, y, z):
            return G(x, y) + G(x + y, z) - G(y, z) - G(x, y + z)

        assert identity_residual(PRODUCT_SQUARED, 1 / 8, 1 / 8, 1 / 8) == pytest.approx(0.0, abs=1e-18)
        assert identity_residual(PRODUCT_SQUARED, 1 / 8, 1 / 4, 1 / 3) == pytest.approx(
            float(Fraction(17, 1024) - Fraction(113, 9216)), abs=1e-15
        )
        assert Fraction(17, 1024) - Fraction(113, 9216) == Fraction(5, 1152)

    def test_cauchy_difference_of_solutions_passes(self):
        fam = XLogX(c=2.0, c_star=0.0)
        rep = check_cocycle_system(cf_map(fam), 1.0, D2, D3)
        assert rep.verdict == "pass"
        fam2 = PowerAffine(c_star=1.0, c=-1.0, q=3.0)
        rep2 = check_cocycle_system(cf_map(fam2), 3.0, D2, D3)
        assert rep2.verdict == "pass"

    def test_homogeneity_scales_are_deterministic_per_seed(self):
        a = check_cocycle_system(PRODUCT, 1.0, D2, D3, seed=7)
        b = check_cocycle_system(PRODUCT, 1.0, D2, D3, seed=7)
        assert a.homogeneity.witness == b.homogeneity.witness
        assert a.homogeneity.max_abs_residual == b.homogeneity.max_abs_residual

    def test_grid_dimension_guard(self):
        with pytest.raises(ValueError):
            check_cocycle_system(PRODUCT, 1.0, D3, D3)
        with pytest.raises(ValueError):
            check_cocycle_system(PRODUCT, 1.0, D2, D2)


class TestDecomposition:
    def test_power_branch_closed_form(self):
        # C_f for f = x - x^2 equals 2uv = -1 * (u^2 + v^2 - (u+v)^2)
        G = cf_map(PowerAffine(c_star=1.0, c=-1.0, q=2.0))
        rep = ng_decomposition_check(G, 2.0, D2, c=-1.0)
        assert rep.verdict == "pass"
        rep_wrong = ng_decomposition_check(G, 2.0, D2, c=1.0)
        assert rep_wrong.verdict == "fail"

    def test_log_branch_uses_phi(self):
        fam = XLogX(c=1.0, c_star=0.0)
        rep = ng_decomposition_check(cf_map(fam), 1.0, D2, phi=fam)
        assert rep.verdict == "pass"

    def test_branch_parameter_mismatches(self):
        G = cf_map(PowerAffine(1.0, -1.0, 2.0))
        with pytest.raises(BranchMismatchError):
            ng_decomposition_check(G, 1.0, D2, c=1.0)
        with pytest.raises(BranchMismatchError):
            ng_decomposition_check(G, 2.0, D2, phi=XLogX(1.0, 0.0))
        with pytest.raises(BranchMismatchError):
            ng_decomposition_check(G, 2.0, D2, c=1.0, phi=XLogX(1.0, 0.0))
        with pytest.raises(BranchMismatchError):
            ng_decomposition_check(G, 2.0, D2)

    def test_product_map_is_not_a_power_difference(self):
        rep = ng_decomposition_check(PRODUCT, 2.0, D2, c=1.0)
        assert rep.verdict == "fail"
