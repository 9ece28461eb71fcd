"""Additive counterexamples: pairs inside a candidate neighborhood whose sum
leaves O, and the resulting incompatibility verdict.

Given any candidate V that contains a ball B(0, r*) around 0 and is
unbounded, the construction picks schedule indices n*, m* with
beta_m* < 1/n* < r* and alpha_m* > n*, draws an x from the unbounded
source with |x| > alpha_m*, and bumps one coordinate just past the first
exceedance index by a rational q between beta_m* and r*. The sum z = x + y
then violates the m*-th threshold pair, so z is outside O while both x and
y lie in V. Since every nonempty clopen set is unbounded, no clopen
neighborhood V of 0 can satisfy V + V inside O, and the clopen-generated
topology cannot make addition continuous.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .exact import (
    Ordering,
    RootValue,
    cmp_rational_vs_root,
    format_rational,
    rational_in_interval,
)
from .space import Point, add, m_index, scale, unit
from .clopen import Schedule, first_failing_n, in_A, in_O


class SourceFailureError(Exception):
    """The unbounded source could not produce a point past the threshold."""


class ScheduleExhaustedError(Exception):
    """No schedule index satisfied a side condition (defensive; valid
    schedules always have one)."""


class InvalidEpsilonError(Exception):
    """The generalized construction needs a positive ball radius."""


_SCHEDULE_SEARCH_CAP = 10 ** 9

#: Maps a norm threshold to a point whose norm exceeds it (exactly checked).
PointSource = Callable[[RootValue], Point]


class WitnessCase:
    NON_NEGATIVE = "NonNegative"
    NEGATIVE = "Negative"


@dataclass(frozen=True)
class VSpec:
    """The consequences of "V is clopen and contains 0" that the
    construction consumes: a ball radius r* with B(0, r*) inside V, and an
    unbounded source of points of V."""

    ball_radius: Fraction
    source: PointSource
    label: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "ball_radius", Fraction(self.ball_radius))
        if self.ball_radius <= 0:
            raise ValueError("ball_radius must be positive")


def _norm_exceeds(point: Point, threshold: RootValue) -> bool:
    """norm(point) > threshold, exactly (threshold^2 is sqrt(base) for a
    degree-4 threshold and base itself for degree 2)."""
    norm_sq = point.norm_sq()
    if threshold.degree == 4:
        return cmp_rational_vs_root(norm_sq, RootValue(threshold.base, 2)) == Ordering.GREATER
    return norm_sq > threshold.base


def ray_source(direction: Optional[Point] = None) -> PointSource:
    """Integer multiples of a fixed nonzero direction (default e_1);
    yields the least multiple past the threshold."""
    if direction is None:
        direction = unit(1)
    if direction.is_zero():
        raise ValueError("ray direction must be nonzero")

    def source(threshold: RootValue) -> Point:
        def exceeds(c: int) -> bool:
            return _norm_exceeds(scale(Fraction(c), direction), threshold)

        c = 1
        while not exceeds(c):
            c *= 2
        lo = c // 2 if c > 1 else 0
        while c - lo > 1:
            mid = (lo + c) // 2
            if exceeds(mid):
                c = mid
            else:
                lo = mid
        return scale(Fraction(c), direction)

    return source


def file_source(points: Sequence[Point]) -> PointSource:
    """Scans a fixed list for the first point past the threshold."""
    points = list(points)

    def source(threshold: RootValue) -> Point:
        for point in points:
            if _norm_exceeds(point, threshold):
                return point
        raise SourceFailureError(
            f"none of the {len(points)} supplied points has norm above the threshold"
        )

    return source


@dataclass(frozen=True)
class WitnessRecord:
    """Everything needed to re-check one counterexample z = x + y."""

    x: Point
    y: Point
    z: Point
    n_star: int
    m_star: int
    l_star: int
    q: Fraction
    case: str
    failing_n: int
    checks: tuple

    def to_json(self) -> dict:
        return {
            "x": self.x.to_json(),
            "y": self.y.to_json(),
            "z": self.z.to_json(),
            "n_star": self.n_star,
            "m_star": self.m_star,
            "l_star": self.l_star,
            "q": format_rational(self.q),
            "case": self.case,
            "failing_n": self.failing_n,
            "checks": [dict(check) for check in self.checks],
        }


def _least_n_star(r_star: Fraction) -> int:
    """Least positive integer with 1/n < r_star."""
    return (1 / r_star).numerator // (1 / r_star).denominator + 1


def _least_m_beta_below(schedule: Schedule, bound: Fraction) -> int:
    """Least m with beta_m < bound (beta decreases to 0)."""
    if bound <= 0:
        raise ScheduleExhaustedError("beta_m must undercut a positive bound")
    m = 1
    while schedule.beta_sq(m) >= bound * bound:
        m *= 2
        if m > _SCHEDULE_SEARCH_CAP:
            raise ScheduleExhaustedError("no schedule index with beta small enough")
    lo = m // 2 if m > 1 else 0
    while m - lo > 1:
        mid = (lo + m) // 2
        if schedule.beta_sq(mid) >= bound * bound:
            lo = mid
        else:
            m = mid
    return m


def _least_m_alpha_above(schedule: Schedule, bound: int) -> int:
    """Least m with alpha_m > bound (alpha increases without bound)."""
    target = Fraction(bound) ** 4
    m = 1
    while schedule.alpha_sq_sq(m) <= target:
        m *= 2
        if m > _SCHEDULE_SEARCH_CAP:
            raise ScheduleExhaustedError("no schedule index with alpha large enough")
    lo = m // 2 if m > 1 else 0
    while m - lo > 1:
        mid = (lo + m) // 2
        if schedule.alpha_sq_sq(mid) <= target:
            lo = mid
        else:
            m = mid
    return m


def construct_witness(v: VSpec, schedule: Schedule) -> WitnessRecord:
    """Build and fully re-check one counterexample for the candidate V."""
    r_star = v.ball_radius
    n_star = _least_n_star(r_star)
    m1 = _least_m_beta_below(schedule, Fraction(1, n_star))
    m2 = _least_m_alpha_above(schedule, n_star)
    m_star = max(m1, m2)

    alpha_star = schedule.alpha_at(m_star)
    x = v.source(alpha_star)
    if not _norm_exceeds(x, alpha_star):
        raise SourceFailureError(
            "source point does not exceed the required threshold norm"
        )

    m_x = m_index(x, alpha_star)
    # norm > alpha_star makes the prefix sums exceed it at some finite index
    assert m_x is not None
    l_star = m_x + 1

    beta_star = schedule.beta_at(m_star)
    q = rational_in_interval(beta_star, r_star)

    if x.coordinate(l_star) >= 0:
        case = WitnessCase.NON_NEGATIVE
        y = scale(q, unit(l_star))
    else:
        case = WitnessCase.NEGATIVE
        y = scale(-q, unit(l_star))
    z = add(x, y)

    checks = verify_witness(x, y, z, m_star, l_star, q, r_star, schedule)
    if any(not check["holds"] for check in checks):
        raise AssertionError(f"witness construction produced a failing check: {checks}")

    return WitnessRecord(
        x=x, y=y, z=z,
        n_star=n_star, m_star=m_star, l_star=l_star,
        q=q, case=case, failing_n=m_star,
        checks=tuple(checks),
    )


def verify_witness(x: Point, y: Point, z: Point, m_star: int, l_star: int,
                   q: Fraction, r_star: Fraction,
                   schedule: Schedule) -> list[dict]:
    """Independently re-check every inequality a witness record asserts.

    Each entry names the inequality and carries the exact quantities
    compared, so a failure is reproducible in isolation.
    """
    alpha_star = schedule.alpha_at(m_star)
    beta_sq_star = schedule.beta_sq(m_star)
    m_x = m_index(x, alpha_star)
    m_z = m_index(z, alpha_star)
    z_l = z.coordinate(l_star)
    failing = first_failing_n(z, schedule)

    checks = [
        {
            "check": "y_in_ball",  # |y|^2 = q^2 < r*^2
            "lhs": format_rational(y.norm_sq()),
            "rhs": format_rational(r_star * r_star),
            "relation": "<",
            "holds": y.norm_sq() < r_star * r_star,
        },
        {
            "check": "z_is_x_plus_y",
            "lhs": (x + y).to_json(),
            "rhs": z.to_json(),
            "relation": "==",
            "holds": add(x, y) == z,
        },
        {
            "check": "m_chain",  # m_z <= m_x < l*
            "lhs": {"m_z": m_z, "m_x": m_x},
            "rhs": {"l_star": l_star},
            "relation": "m_z <= m_x < l_star",
            "holds": m_z is not None and m_x is not None and m_z <= m_x < l_star,
        },
        {
            "check": "coordinate_violation",  # |z_l*|^2 > beta_m*^2
            "lhs": format_rational(z_l * z_l),
            "rhs": format_rational(beta_sq_star),
            "relation": ">",
            "holds": z_l * z_l > beta_sq_star,
        },
        {
            "check": "z_outside_A_at_m_star",
            "lhs": {"in_A": in_A(z, schedule.pair_at(m_star))},
            "rhs": {"expected": False},
            "relation": "==",
            "holds": not in_A(z, schedule.pair_at(m_star)),
        },
        {
            "check": "z_outside_O",
            "lhs": {"first_failing_n": failing},
            "rhs": {"failing_n_at_most": m_star},
            "relation": "exists a failing index <= m*",
            "holds": failing is not None and failing <= m_star
            and not in_O(z, schedule),
        },
    ]
    return checks


def generalized_witness(k_source: PointSource, eps: Fraction,
                        schedule: Schedule) -> WitnessRecord:
    """Same construction for an arbitrary unbounded set K and ball B(0, eps):
    some x in K plus some y with |y| < eps lands outside O."""
    eps = Fraction(eps)
    if eps <= 0:
        raise InvalidEpsilonError(f"eps must be positive, got {eps}")
    return construct_witness(VSpec(eps, k_source, label="generalized"), schedule)


@dataclass(frozen=True)
class RefutationVerdict:
    """Machine-checkable assembly of the incompatibility argument."""

    premise: str
    witness: WitnessRecord
    rechecks: tuple
    conclusion: str
    holds: bool

    def to_json(self) -> dict:
        return {
            "premise": self.premise,
            "witness": self.witness.to_json(),
            "rechecks": [dict(check) for check in self.rechecks],
            "conclusion": self.conclusion,
            "holds": self.holds,
        }


_PREMISE = (
    "The only bounded clopen subset of the space is empty, so any clopen "
    "candidate V containing 0 is unbounded and contains some ball B(0, r*)."
)

_CONCLUSION = (
    "V + V is not contained in the clopen neighborhood O of 0: the witness "
    "z = x + y lies outside O although x and y lie in V. Since V was an "
    "arbitrary clopen neighborhood of 0, no such V satisfies V + V inside O, "
    "so addition is not continuous at (0, 0) and the clopen-generated "
    "topology is not a group topology."
)


def refute_group_compatibility(v: VSpec, schedule: Schedule) -> RefutationVerdict:
    """Produce the full verdict for one candidate V, all memberships
    re-verified."""
    record = construct_witness(v, schedule)
    rechecks = verify_witness(
        record.x, record.y, record.z, record.m_star, record.l_star,
        record.q, v.ball_radius, schedule,
    )
    holds = all(check["holds"] for check in rechecks)
    return RefutationVerdict(
        premise=_PREMISE,
        witness=record,
        rechecks=tuple(rechecks),
        conclusion=_CONCLUSION,
        holds=holds,
    )
