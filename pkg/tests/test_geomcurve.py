import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heightlab.geomcurve import (
    BranchData,
    ConstantMap,
    CurveMap,
    NotAMorphism,
    approx_exponent,
    change_coordinates,
    change_parameter,
    conic_p2,
    coordinate_line_p2,
    curve_from_json,
    curve_to_json,
    double_cover_line,
    expected_dim,
    geometric_freeness,
    h0_twist,
    identity_p1,
    is_very_free,
    limit_experiment,
    line_p2,
    mckinnon_roth_alpha,
    splitting_type,
    twisted_cubic,
)


class TestSplittingType:
    def test_line(self):
        assert splitting_type(line_p2()).a == (2, 1)
        assert splitting_type(coordinate_line_p2()).a == (2, 1)

    def test_conic_is_balanced(self):
        # the Euler extension 0 -> O(2) -> E -> O(4) -> 0 does not split:
        # h^0(E(-4)) = 0, so there is no O(4) summand
        assert h0_twist(conic_p2(), -4) == 0
        assert splitting_type(conic_p2()).a == (3, 3)

    def test_twisted_cubic_is_balanced(self):
        assert h0_twist(twisted_cubic(), -5) == 0
        assert splitting_type(twisted_cubic()).a == (4, 4, 4)

    def test_double_cover_of_line(self):
        # pull-back of the split restriction (2,1) under a degree 2 cover
        assert splitting_type(double_cover_line()).a == (4, 2)

    def test_identity(self):
        assert splitting_type(identity_p1()).a == (2,)

    def test_degree_sum(self):
        for c in (line_p2(), conic_p2(), twisted_cubic(), double_cover_line()):
            assert splitting_type(c).degree == (c.n + 1) * c.d

    def test_h0_at_zero_counts_global_deformations(self):
        # h^0(f* T) = sum (a_i + 1) when all a_i >= 0
        for c in (line_p2(), conic_p2(), twisted_cubic()):
            st_ = splitting_type(c)
            assert h0_twist(c, 0) == sum(a + 1 for a in st_.a)

    def test_coordinate_invariance(self):
        u = ((1, 1, 0), (0, 1, 0), (2, 0, 1))
        assert splitting_type(change_coordinates(conic_p2(), u)).a == (3, 3)
        u4 = ((1, 0, 0, 3), (0, 1, 0, 0), (0, 1, 1, 0), (0, 0, 0, 1))
        assert splitting_type(change_coordinates(twisted_cubic(), u4)).a == (4, 4, 4)

    def test_parameter_invariance(self):
        g = ((2, 1), (1, 1))
        assert splitting_type(change_parameter(conic_p2(), g)).a == (3, 3)
        assert splitting_type(change_parameter(line_p2(), g)).a == (2, 1)

    def test_reparametrized_map_agrees_pointwise(self):
        g = ((1, 2), (0, 1))
        c = conic_p2()
        cg = change_parameter(c, g)
        for u, v in [(1, 0), (0, 1), (3, 2), (-1, 4)]:
            su, sv = u + 2 * v, v
            assert cg.evaluate(u, v) == c.evaluate(su, sv)


class TestValidation:
    def test_degree_zero_is_constant(self):
        with pytest.raises(ConstantMap):
            CurveMap(n=2, d=0, forms=((1,), (2,), (3,)))

    def test_proportional_forms_are_constant(self):
        with pytest.raises(ConstantMap):
            CurveMap(n=2, d=2, forms=((1, 0, 0), (2, 0, 0), (0, 0, 0)))

    def test_common_factor_rejected(self):
        with pytest.raises(NotAMorphism):
            CurveMap(n=2, d=2, forms=((1, 1, 0), (0, 1, 1), (1, 2, 1)))

    def test_common_s_rejected(self):
        with pytest.raises(NotAMorphism):
            CurveMap(n=1, d=2, forms=((1, 1, 0), (0, 1, 0)))

    def test_common_t_rejected(self):
        with pytest.raises(NotAMorphism):
            CurveMap(n=1, d=2, forms=((0, 1, 1), (0, 0, 1)))

    def test_homogeneity_enforced(self):
        with pytest.raises(ValueError):
            CurveMap(n=1, d=2, forms=((1, 0), (0, 1)))

    def test_evaluate_scaling(self):
        c = conic_p2()
        base = c.evaluate(3, 2)
        scaled = c.evaluate(6, 4)
        assert scaled == tuple(4 * x for x in base)


class TestFreeness:
    def test_values(self):
        assert geometric_freeness(line_p2()) == Fraction(2, 3)
        assert geometric_freeness(conic_p2()) == Fraction(1)
        assert geometric_freeness(twisted_cubic()) == Fraction(1)
        assert geometric_freeness(double_cover_line()) == Fraction(2, 3)
        assert geometric_freeness(identity_p1()) == Fraction(1)

    def test_always_very_free_into_pn(self):
        # dual Euler sequence forces a_n >= d >= 1 for any morphism to P^n
        for c in (line_p2(), conic_p2(), twisted_cubic(),
                  double_cover_line(), identity_p1()):
            assert is_very_free(c)
            assert splitting_type(c).a[-1] >= c.d


class TestBranches:
    def test_single_rational_branch(self):
        assert mckinnon_roth_alpha(BranchData(((1, 1),), 3)) == Fraction(1, 3)
        assert mckinnon_roth_alpha(BranchData(((1, 1),), 2)) == Fraction(1, 2)

    def test_complex_branch_contributes_zero(self):
        assert mckinnon_roth_alpha(BranchData(((0, 5),), 4)) == 0

    def test_max_over_branches(self):
        b = BranchData(((1, 2), (2, 1), (0, 7)), 4)
        assert mckinnon_roth_alpha(b) == Fraction(1, 2)

    def test_invalid(self):
        with pytest.raises(ValueError):
            BranchData((), 3)
        with pytest.raises(ValueError):
            BranchData(((3, 1),), 3)
        with pytest.raises(ValueError):
            BranchData(((1, 0),), 3)


class TestExpectedDim:
    def test_values(self):
        assert expected_dim(2, 1, 0) == 5
        assert expected_dim(1, 1, 0) == 3
        assert expected_dim(2, 1, 2) == 1
        assert expected_dim(3, 3, 0) == 15

    def test_invalid(self):
        with pytest.raises(ValueError):
            expected_dim(0, 1, 0)
        with pytest.raises(ValueError):
            expected_dim(2, 1, -1)


class TestLimitExperiment:
    def test_line_gap_law(self):
        # image points (k, k+1, k+1) satisfy |l - 2/3| * h = log 2 exactly
        rows = limit_experiment(line_p2(), [10, 100, 1000, 10000])
        assert len(rows) == 4
        for r in rows:
            assert abs(r.gap * r.h_image - math.log(2)) < 1e-9
        gaps = [r.gap for r in rows]
        assert gaps == sorted(gaps, reverse=True)
        assert rows[2].gap <= 0.05  # parameter height 10^3

    def test_line_fit_exponent(self):
        rows = limit_experiment(line_p2(), [10, 32, 100, 316, 1000])
        assert abs(approx_exponent(rows) + 1.0) < 1e-6

    def test_identity_all_free(self):
        rows = limit_experiment(identity_p1(), [5, 50, 500])
        assert all(r.l == 1.0 for r in rows)
        with pytest.raises(ValueError):
            approx_exponent(rows)  # every gap is zero

    def test_zero_height_image_skipped(self):
        c = CurveMap(n=1, d=1, forms=((2, -1), (-1, 1)))
        rows = limit_experiment(c, [2, 3])
        assert [r.param for r in rows] == [(2, 3)]

    def test_double_cover_converges_to_two_thirds(self):
        # image points sit on the coordinate line, where l = 2/3 exactly
        rows = limit_experiment(double_cover_line(), [10, 100])
        for r in rows:
            assert abs(r.l - 2 / 3) < 1e-12
            assert r.gap < 1e-12


class TestSerialization:
    def test_roundtrip(self):
        c = twisted_cubic()
        assert curve_from_json(curve_to_json(c)) == c

    def test_format(self):
        text = curve_to_json(line_p2())
        assert '"n": 2' in text and '"d": 1' in text


@settings(deadline=None, max_examples=40)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3),
                min_size=3, max_size=3))
def test_random_conics_sum_rule(coeffs):
    try:
        c = CurveMap(n=2, d=2, forms=tuple(tuple(f) for f in coeffs))
    except ValueError:
        return
    st_ = splitting_type(c)
    assert st_.degree == 6
    assert st_.a[0] >= 2
    assert st_.a[-1] >= c.d
    g = ((1, 1), (0, 1))
    assert splitting_type(change_parameter(c, g)).a == st_.a
