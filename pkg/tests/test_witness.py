"""Witness construction, the generalized variant, and the verdict."""

from fractions import Fraction as F

import pytest

from erdos_clopen.space import Point, unit
from erdos_clopen.clopen import DEFAULT_SCHEDULE, Schedule, in_O
from erdos_clopen.witness import (
    InvalidEpsilonError,
    SourceFailureError,
    VSpec,
    WitnessCase,
    construct_witness,
    file_source,
    generalized_witness,
    ray_source,
    refute_group_compatibility,
    verify_witness,
)

import oracle


def pt(entries) -> Point:
    return Point([(i, F(v)) for i, v in entries])


def oracle_recheck(record, schedule=DEFAULT_SCHEDULE):
    """Re-verify a record's content with the interval oracle only."""
    a_base = lambda n: 2 * schedule.alpha_scale ** 4 * n ** 4
    b_base = lambda n: 2 * schedule.beta_scale ** 2 / (n * n)
    m_star = record.m_star
    assert not oracle.in_O(record.z.entries, a_base, b_base)
    assert not oracle.in_A(record.z.entries, a_base(m_star), b_base(m_star))
    m_x = oracle.m_index(record.x.entries, a_base(m_star))
    m_z = oracle.m_index(record.z.entries, a_base(m_star))
    assert m_z is not None and m_z <= m_x < record.l_star
    z_l = abs(record.z.coordinate(record.l_star))
    assert oracle.cmp_rational_vs_root(z_l, b_base(m_star), 2) == "gt"


class TestConstructWitness:
    def test_spec_ray_example(self):
        record = construct_witness(VSpec(F(1), ray_source()), DEFAULT_SCHEDULE)
        assert record.n_star == 2
        assert record.m_star == 3
        assert record.x == pt([(1, 4)])
        assert record.l_star == 2
        assert record.q == F(1, 2)
        assert record.case == WitnessCase.NON_NEGATIVE
        assert record.z == pt([(1, 4), (2, F(1, 2))])
        assert record.failing_n == 3
        assert all(check["holds"] for check in record.checks)
        oracle_recheck(record)

    def test_negative_case(self):
        source = file_source([pt([(7, -5), (8, -3)])])
        record = construct_witness(VSpec(F(1), source), DEFAULT_SCHEDULE)
        assert record.case == WitnessCase.NEGATIVE
        assert record.l_star == 8
        assert record.y.coordinate(8) == -record.q
        assert record.z.coordinate(8) == -3 - record.q
        assert not in_O(record.z, DEFAULT_SCHEDULE)
        oracle_recheck(record)

    def test_zero_coordinate_at_l_star_is_nonnegative_case(self):
        source = file_source([pt([(7, -5)])])  # l* = 8 carries coordinate 0
        record = construct_witness(VSpec(F(1), source), DEFAULT_SCHEDULE)
        assert record.l_star == 8
        assert record.case == WitnessCase.NON_NEGATIVE
        assert record.z.coordinate(8) == record.q
        oracle_recheck(record)

    def test_vspec_rejects_nonpositive_radius(self):
        with pytest.raises(ValueError):
            VSpec(F(0), ray_source())
        with pytest.raises(ValueError):
            VSpec(F(-1), ray_source())

    def test_bounded_source_fails(self):
        bounded = file_source([pt([(1, 1)]), pt([(2, F(1, 2))])])
        with pytest.raises(SourceFailureError):
            construct_witness(VSpec(F(1), bounded), DEFAULT_SCHEDULE)

    def test_lying_source_is_caught(self):
        def liar(threshold):
            return pt([(1, 1)])

        with pytest.raises(SourceFailureError):
            construct_witness(VSpec(F(1), liar), DEFAULT_SCHEDULE)

    def test_determinism(self):
        v = VSpec(F(2, 3), ray_source(pt([(2, 1), (5, -1)])))
        a = construct_witness(v, DEFAULT_SCHEDULE)
        b = construct_witness(v, DEFAULT_SCHEDULE)
        assert a == b

    def test_q_strictly_between_beta_and_radius(self):
        for r_star in (F(1), F(1, 3), F(7, 2), F(1, 17)):
            record = construct_witness(VSpec(r_star, ray_source()),
                                       DEFAULT_SCHEDULE)
            beta_sq = DEFAULT_SCHEDULE.beta_sq(record.m_star)
            assert record.q * record.q > beta_sq
            assert record.q < r_star
            assert record.y.norm_sq() < r_star * r_star

    def test_scaled_schedule(self):
        schedule = Schedule(alpha_scale=F(1, 2), beta_scale=F(3))
        record = construct_witness(VSpec(F(1), ray_source()), schedule)
        assert all(check["holds"] for check in record.checks)
        assert not in_O(record.z, schedule)


class TestIndexMinimality:
    """The construction picks the least admissible schedule indices."""

    def test_n_star_minimal(self):
        for r_star in (F(1), F(1, 2), F(2, 3), F(3), F(7, 5), F(1, 12)):
            record = construct_witness(VSpec(r_star, ray_source()),
                                       DEFAULT_SCHEDULE)
            n = record.n_star
            assert F(1, n) < r_star
            assert n == 1 or F(1, n - 1) >= r_star

    def test_m_star_bounds(self):
        for r_star in (F(1), F(1, 5), F(4), F(2, 7)):
            record = construct_witness(VSpec(r_star, ray_source()),
                                       DEFAULT_SCHEDULE)
            m, n = record.m_star, record.n_star
            s = DEFAULT_SCHEDULE
            # beta_m < 1/n and alpha_m > n at m*
            assert s.beta_sq(m) < F(1, n * n)
            assert s.alpha_sq_sq(m) > n ** 4
            # m* = max(m1, m2) with both minimal: one step earlier, one of
            # the two side conditions must fail
            if m > 1:
                assert (s.beta_sq(m - 1) > F(1, n * n)
                        or s.alpha_sq_sq(m - 1) < n ** 4)

    def test_l_star_is_least_admissible(self):
        from erdos_clopen.space import m_index
        record = construct_witness(VSpec(F(1), ray_source()), DEFAULT_SCHEDULE)
        alpha = DEFAULT_SCHEDULE.alpha_at(record.m_star)
        assert record.l_star == m_index(record.x, alpha) + 1


class TestGeneralizedWitness:
    def test_spec_eps_ladder(self):
        # beta_m* < 1/n* requires m large once eps shrinks: sqrt(2)/m < 1/10
        # forces m >= 15 for eps = 1/10
        record = generalized_witness(ray_source(), F(1, 10), DEFAULT_SCHEDULE)
        assert record.m_star >= 15
        assert record.q < F(1, 10)
        assert not in_O(record.z, DEFAULT_SCHEDULE)
        oracle_recheck(record)

    def test_rejects_nonpositive_eps(self):
        with pytest.raises(InvalidEpsilonError):
            generalized_witness(ray_source(), F(0), DEFAULT_SCHEDULE)
        with pytest.raises(InvalidEpsilonError):
            generalized_witness(ray_source(), F(-1, 2), DEFAULT_SCHEDULE)

    def test_first_ray_point_past_threshold_is_used(self):
        record = generalized_witness(ray_source(), F(1, 2), DEFAULT_SCHEDULE)
        # x = n*e_1 for the first n past alpha_m*
        alpha4 = DEFAULT_SCHEDULE.alpha_sq_sq(record.m_star)
        n = record.x.coordinate(1)
        assert (n * n) ** 2 > alpha4
        assert ((n - 1) * (n - 1)) ** 2 < alpha4


class TestVerdict:
    def test_ray_verdict(self):
        verdict = refute_group_compatibility(VSpec(F(1), ray_source()),
                                             DEFAULT_SCHEDULE)
        assert verdict.holds
        assert all(check["holds"] for check in verdict.rechecks)
        data = verdict.to_json()
        assert data["holds"] is True
        assert data["witness"]["q"] == "1/2"
        assert {c["check"] for c in data["rechecks"]} == {
            "y_in_ball", "z_is_x_plus_y", "m_chain",
            "coordinate_violation", "z_outside_A_at_m_star", "z_outside_O",
        }

    def test_whole_space_candidate(self):
        # V = the whole space: any unbounded source works, r* arbitrary
        verdict = refute_group_compatibility(
            VSpec(F(1), ray_source(pt([(3, 2)]))), DEFAULT_SCHEDULE)
        assert verdict.holds

    def test_verdict_withheld_for_bounded_source(self):
        bounded = file_source([pt([(1, 1)])])
        with pytest.raises(SourceFailureError):
            refute_group_compatibility(VSpec(F(1), bounded), DEFAULT_SCHEDULE)


class TestVerifyWitnessChecks:
    def test_every_check_traces_exact_quantities(self):
        record = construct_witness(VSpec(F(1), ray_source()), DEFAULT_SCHEDULE)
        checks = verify_witness(record.x, record.y, record.z, record.m_star,
                                record.l_star, record.q, F(1), DEFAULT_SCHEDULE)
        by_name = {c["check"]: c for c in checks}
        assert by_name["y_in_ball"]["lhs"] == "1/4"
        assert by_name["coordinate_violation"]["holds"]

    def test_tampered_witness_is_flagged(self):
        record = construct_witness(VSpec(F(1), ray_source()), DEFAULT_SCHEDULE)
        bad_z = record.z + unit(record.l_star)  # no longer x + y
        checks = verify_witness(record.x, record.y, bad_z, record.m_star,
                                record.l_star, record.q, F(1), DEFAULT_SCHEDULE)
        assert not all(c["holds"] for c in checks)
