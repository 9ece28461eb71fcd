"""Set memberships and neighborhood-radius certificates."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from erdos_clopen.exact import Ordering, RootValue, cmp_root_expr, RootExpr
from erdos_clopen.space import ZERO, Point
from erdos_clopen.clopen import (
    DEFAULT_PAIR,
    DEFAULT_SCHEDULE,
    CertificateKind,
    PreconditionViolatedError,
    Schedule,
    closedness_radius,
    first_failing_n,
    in_A,
    in_E_alpha,
    in_O,
    o_openness_radius,
    openness_radius,
)

import oracle


def pt(*coords) -> Point:
    return Point([(i + 1, F(c)) for i, c in enumerate(coords) if c != 0])


def expr_value_le(bound: F, expr) -> bool:
    return cmp_root_expr(RootExpr.of_rational(bound), expr) != Ordering.GREATER


entry_strategy = st.lists(
    st.tuples(st.integers(min_value=1, max_value=12),
              st.fractions(min_value=-8, max_value=8, max_denominator=8)),
    max_size=6, unique_by=lambda t: t[0],
)


class TestSchedule:
    def test_default_bases(self):
        s = DEFAULT_SCHEDULE
        assert s.alpha_at(1) == RootValue(F(2), 4)
        assert s.alpha_at(3) == RootValue(F(162), 4)      # 2*3^4
        assert s.beta_at(1) == RootValue(F(2), 2)
        assert s.beta_at(3) == RootValue(F(2, 9), 2)

    def test_monotonicity_and_limits(self):
        s = DEFAULT_SCHEDULE
        for n in range(1, 12):
            assert s.alpha_sq_sq(n + 1) > s.alpha_sq_sq(n)
            assert s.beta_sq(n + 1) < s.beta_sq(n)

    def test_scaled_schedules_stay_valid(self):
        s = Schedule(alpha_scale=F(3, 7), beta_scale=F(5, 2))
        for n in (1, 2, 9):
            s.pair_at(n)  # RootValue invariants hold for every index

    def test_rejects_nonpositive_scales(self):
        with pytest.raises(ValueError):
            Schedule(alpha_scale=F(0))
        with pytest.raises(ValueError):
            Schedule(beta_scale=F(-1))

    def test_json_round_trip_and_degree_guard(self):
        s = Schedule(alpha_scale=F(2), beta_scale=F(1, 3))
        assert Schedule.from_json(s.to_json()) == s
        with pytest.raises(ValueError):
            Schedule.from_json({"alpha_scale": "1/1", "beta_scale": "1/1",
                                "degree": 2})

    def test_least_n_with_alpha_above(self):
        s = DEFAULT_SCHEDULE
        assert s.least_n_with_alpha_above(F(0)) == 1
        assert s.least_n_with_alpha_above(F(5)) == 2   # 5 < 4*sqrt(2) ~ 5.657
        assert s.least_n_with_alpha_above(F(6)) == 3   # 6 > 4*sqrt(2)

    @given(st.fractions(min_value=0, max_value=500, max_denominator=16))
    @settings(max_examples=200)
    def test_least_n_is_least(self, norm):
        s = DEFAULT_SCHEDULE
        n = s.least_n_with_alpha_above(norm)
        assert norm * norm < s.alpha_sq_sq(n)
        if n > 1:
            assert norm * norm > s.alpha_sq_sq(n - 1)


class TestMemberships:
    def test_in_E_alpha_examples(self):
        alpha = DEFAULT_PAIR.alpha
        assert in_E_alpha(ZERO, alpha)
        assert not in_E_alpha(pt(2), alpha)
        assert in_E_alpha(pt(1), alpha)

    def test_in_A_examples(self):
        assert in_A(pt(1), DEFAULT_PAIR)
        assert not in_A(pt(2, 1), DEFAULT_PAIR)
        assert in_A(pt(2, F(1, 2)), DEFAULT_PAIR)

    def test_in_O_examples(self):
        assert in_O(ZERO, DEFAULT_SCHEDULE)
        assert in_O(pt(2, 1), DEFAULT_SCHEDULE)
        assert not in_O(pt(3, 1), DEFAULT_SCHEDULE)
        assert first_failing_n(pt(3, 1), DEFAULT_SCHEDULE) == 2

    @given(entry_strategy)
    @settings(max_examples=150)
    def test_in_A_matches_oracle(self, entries):
        x = Point(entries)
        assert in_A(x, DEFAULT_PAIR) == oracle.in_A(x.entries, F(2), F(1, 2))

    @given(entry_strategy)
    @settings(max_examples=60)
    def test_in_O_matches_oracle(self, entries):
        x = Point(entries)
        got = in_O(x, DEFAULT_SCHEDULE)
        assert got == oracle.in_O(x.entries,
                                  lambda n: F(2) * n ** 4,
                                  lambda n: F(2, n * n))

    @given(entry_strategy)
    @settings(max_examples=100)
    def test_in_O_finite_check_stability(self, entries):
        x = Point(entries)
        cutoff = DEFAULT_SCHEDULE.least_n_with_alpha_above(x.norm_sq())
        extended = all(in_A(x, DEFAULT_SCHEDULE.pair_at(n))
                       for n in range(1, cutoff + 11))
        assert in_O(x, DEFAULT_SCHEDULE) == extended

    @given(entry_strategy)
    @settings(max_examples=150)
    def test_claim1_ball_inside_A(self, entries):
        x = Point(entries)
        norm = x.norm_sq()
        if norm * norm < DEFAULT_PAIR.alpha.base:  # |x| < alpha
            assert in_A(x, DEFAULT_PAIR)


class TestClosednessRadius:
    def test_spec_example_components(self):
        cert = closedness_radius(pt(2, 1), DEFAULT_PAIR)
        assert cert.kind == CertificateKind.CLAIM2_R0
        assert cert.components["m"] == 1
        assert cert.components["l0"] == 2
        # the coordinate margin 1 - sqrt(1/2) ~ 0.2929 is the minimum
        assert oracle.cmp_value_vs_rational(
            oracle.terms_of_expr(cert.components["coordinate_margin"]),
            cert.bound) in ("gt", None)
        # frozen regression value: largest rational below 1 - sqrt(1/2)
        # with denominator <= 10^6 (oracle-checked above)
        assert cert.bound == F(275807, 941664)

    def test_prefix_margin_can_be_the_minimum(self):
        cert = closedness_radius(pt(2, 3), DEFAULT_PAIR)
        # min(3 - sqrt(1/2), 2 - 2^(1/4)) = 2 - 2^(1/4) ~ 0.8108
        assert oracle.cmp_exprs(
            oracle.terms_of_expr(cert.components["prefix_margin"]),
            oracle.terms_of_expr(cert.components["coordinate_margin"])) == "lt"
        assert cert.bound == F(343507, 423668)

    def test_requires_point_outside_A(self):
        with pytest.raises(PreconditionViolatedError):
            closedness_radius(pt(1), DEFAULT_PAIR)
        with pytest.raises(PreconditionViolatedError):
            closedness_radius(ZERO, DEFAULT_PAIR)

    def test_bound_certified_below_both_components(self):
        cert = closedness_radius(pt(2, 1), DEFAULT_PAIR)
        for key in ("coordinate_margin", "prefix_margin"):
            assert expr_value_le(cert.bound, cert.components[key])


class TestOpennessRadius:
    def test_case2_spec_example(self):
        cert = openness_radius(pt(2, F(1, 2)), DEFAULT_PAIR)
        assert cert.kind == CertificateKind.CLAIM3_R
        assert cert.components["m"] == 1
        assert cert.components["l0"] == 3
        assert cert.components["a"] == RootExpr.of_rational(F(1))
        # minimum is h = beta - 1/2 ~ 0.2071
        assert cert.bound == F(40391, 195025)
        for key in ("prefix_margin", "beta_half", "h", "a"):
            assert expr_value_le(cert.bound, cert.components[key])

    def test_case1_margin_examples(self):
        cert = openness_radius(pt(1), DEFAULT_PAIR)
        assert cert.kind == CertificateKind.CLAIM1_MARGIN
        # bound < 2^(1/4) - 1 ~ 0.18921
        assert oracle.cmp_value_vs_rational(
            oracle.terms_of_expr(cert.components["ball_margin"]),
            cert.bound) in ("gt", None)
        zero_cert = openness_radius(ZERO, DEFAULT_PAIR)
        assert zero_cert.kind == CertificateKind.CLAIM1_MARGIN
        assert F(118, 100) < zero_cert.bound < F(119, 100)  # just under alpha

    def test_sentinel_only_when_m_is_1(self):
        cert = openness_radius(pt(1, 1, F(1, 3)), DEFAULT_PAIR)  # m = 2
        assert cert.components["m"] == 2
        assert cert.components["a"] != RootExpr.of_rational(F(1))

    def test_requires_point_inside_A(self):
        with pytest.raises(PreconditionViolatedError):
            openness_radius(pt(2, 1), DEFAULT_PAIR)


class TestOOpennessRadius:
    def test_spec_examples(self):
        zero_cert = o_openness_radius(ZERO, DEFAULT_SCHEDULE)
        assert zero_cert.kind == CertificateKind.CLAIM4_W
        assert zero_cert.components["n0"] == 1
        assert F(118, 100) < zero_cert.bound < F(119, 100)

        cert = o_openness_radius(pt(2, 1), DEFAULT_SCHEDULE)
        assert cert.components["n0"] == 2
        # ball margin alpha_2 - sqrt(5) ~ 0.1423 is the minimum
        assert F(14, 100) < cert.bound < F(15, 100)
        assert expr_value_le(cert.bound, cert.components["ball_margin"])

    def test_requires_point_inside_O(self):
        with pytest.raises(PreconditionViolatedError):
            o_openness_radius(pt(3, 1), DEFAULT_SCHEDULE)


class TestCertificateNeighborhoods:
    """Local-certificate property tests: sampled in-radius perturbations
    preserve the certified membership."""

    @staticmethod
    def _perturb(base: Point, bound: F, k: int) -> Point:
        from erdos_clopen.harness import SplitMix64, perturb_within, SampleConfig
        return perturb_within(base, bound, SplitMix64(k),
                              SampleConfig(seed=k, count=1))

    @given(entry_strategy, st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=120, deadline=None)
    def test_closedness_certificate_locally_excludes(self, entries, k):
        z = Point(entries)
        if in_A(z, DEFAULT_PAIR):
            return
        cert = closedness_radius(z, DEFAULT_PAIR)
        assert cert.bound > 0
        y = self._perturb(z, cert.bound, k)
        assert not in_A(y, DEFAULT_PAIR)

    @given(entry_strategy, st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=120, deadline=None)
    def test_openness_certificate_locally_includes(self, entries, k):
        x = Point(entries)
        if not in_A(x, DEFAULT_PAIR):
            return
        cert = openness_radius(x, DEFAULT_PAIR)
        assert cert.bound > 0
        y = self._perturb(x, cert.bound, k)
        assert in_A(y, DEFAULT_PAIR)

    @given(entry_strategy, st.integers(min_value=0, max_value=10 ** 6))
    @settings(max_examples=60, deadline=None)
    def test_o_certificates_both_sides(self, entries, k):
        x = Point(entries)
        if in_O(x, DEFAULT_SCHEDULE):
            cert = o_openness_radius(x, DEFAULT_SCHEDULE)
            y = self._perturb(x, cert.bound, k)
            assert in_O(y, DEFAULT_SCHEDULE)
        else:
            n_bad = first_failing_n(x, DEFAULT_SCHEDULE)
            cert = closedness_radius(x, DEFAULT_SCHEDULE.pair_at(n_bad))
            y = self._perturb(x, cert.bound, k)
            assert not in_O(y, DEFAULT_SCHEDULE)
