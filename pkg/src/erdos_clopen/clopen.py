"""Threshold-pair set families, their intersection O, and radius certificates.

For a pair (alpha, beta) with alpha^2 and beta irrational, a point belongs
to the building-block set A when either its prefix norms never exceed
alpha (the index m below does not exist) or every coordinate past that
first-exceedance index m is smaller than beta in absolute value. O is the
intersection of the A-sets along a schedule alpha_n up, beta_n down; on a
finite-support point the intersection is decided by finitely many checks
because once the whole norm drops below alpha_n the point is inside
automatically.

Each certificate emitted here is a positive rational lower bound for one
of the explicit neighborhood radii, certified by exact comparisons only,
so samplers can exercise the open/closed character of the sets at desk
scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .exact import (
    RootExpr,
    RootValue,
    expr_min,
    format_rational,
    is_rational_power,
    largest_rational_at_most,
    parse_rational,
)
from .space import Point, m_index

DEFAULT_DEN_CAP = 10 ** 6


class PreconditionViolatedError(Exception):
    """A radius certificate was requested for a point on the wrong side."""


class CertificateKind:
    CLAIM1_MARGIN = "Claim1Margin"
    CLAIM2_R0 = "Claim2_r0"
    CLAIM3_R1 = "Claim3_r1"  # reachable only for infinite-support points
    CLAIM3_R = "Claim3_r"
    CLAIM4_W = "Claim4_W"


def sqrt_expr(value: Fraction) -> RootExpr:
    """sqrt of a nonnegative rational as an expression (rational if exact)."""
    if value < 0:
        raise ValueError(f"sqrt_expr needs a nonnegative value, got {value}")
    if value == 0:
        return RootExpr.of_rational(Fraction(0))
    exact = is_rational_power(value, 2)
    if exact is not None:
        return RootExpr.of_rational(exact)
    return RootExpr.of_root(Fraction(1), RootValue(value, 2))


@dataclass(frozen=True)
class AlphaBetaPair:
    """Thresholds alpha (degree-4 root, so alpha^2 is irrational) and beta
    (degree-2 root, so beta itself is irrational)."""

    alpha: RootValue
    beta: RootValue

    def __post_init__(self):
        if self.alpha.degree != 4:
            raise ValueError("alpha must be a degree-4 root value")
        if self.beta.degree != 2:
            raise ValueError("beta must be a degree-2 root value")

    @property
    def beta_sq(self) -> Fraction:
        """beta^2 is the rational base: coordinate tests |x_l| < beta reduce
        to the exact rational comparison x_l^2 < beta_sq."""
        return self.beta.base

    def alpha_expr(self) -> RootExpr:
        return RootExpr.of_root(Fraction(1), self.alpha)

    def beta_expr(self) -> RootExpr:
        return RootExpr.of_root(Fraction(1), self.beta)

    def to_json(self) -> dict:
        return {"alpha": self.alpha.to_json(), "beta": self.beta.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "AlphaBetaPair":
        return cls(RootValue.from_json(data["alpha"]), RootValue.from_json(data["beta"]))


DEFAULT_PAIR = AlphaBetaPair(RootValue(Fraction(2), 4), RootValue(Fraction(1, 2), 2))


@dataclass(frozen=True)
class Schedule:
    """The threshold sequences alpha_n = a*n*2^(1/4) and beta_n = b*sqrt(2)/n.

    alpha_n is strictly increasing and unbounded with alpha_n^2 = a^2*n^2*sqrt(2)
    irrational; beta_n strictly decreases to 0 and is irrational. Any positive
    rational scaling constants a, b keep every side condition (the factor 2
    under the root can never be absorbed into a rational square), so
    validation reduces to positivity plus constructing the n=1 roots.
    """

    alpha_scale: Fraction = Fraction(1)
    beta_scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "alpha_scale", Fraction(self.alpha_scale))
        object.__setattr__(self, "beta_scale", Fraction(self.beta_scale))
        if self.alpha_scale <= 0 or self.beta_scale <= 0:
            raise ValueError("schedule scales must be positive")
        self.pair_at(1)  # surfaces invalid roots immediately

    def alpha_at(self, n: int) -> RootValue:
        self._check_n(n)
        return RootValue(2 * self.alpha_scale ** 4 * n ** 4, 4)

    def beta_at(self, n: int) -> RootValue:
        self._check_n(n)
        return RootValue(2 * self.beta_scale ** 2 / (n * n), 2)

    def pair_at(self, n: int) -> AlphaBetaPair:
        self._check_n(n)
        return _cached_pair(self, n)

    @staticmethod
    def _check_n(n: int) -> None:
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"schedule index must be a positive integer, got {n!r}")

    def alpha_sq_sq(self, n: int) -> Fraction:
        """alpha_n^4, which is rational; norm_sq < alpha_n^2 iff norm_sq^2 < this."""
        return 2 * self.alpha_scale ** 4 * n ** 4

    def beta_sq(self, n: int) -> Fraction:
        return 2 * self.beta_scale ** 2 / (n * n)

    def least_n_with_alpha_above(self, norm_sq: Fraction) -> int:
        """Least n with norm_sq < alpha_n^2 (equality cannot occur).

        norm_sq < alpha_n^2 iff norm_sq^2 < 2*a^4*n^4; integer-only search.
        """
        coef = 2 * self.alpha_scale ** 4
        p, q = norm_sq.numerator, norm_sq.denominator
        lhs = p * p * coef.denominator
        rhs_unit = coef.numerator * q * q  # condition: lhs < rhs_unit * n^4
        n = 1
        while lhs >= rhs_unit * n ** 4:
            n *= 2
        lo = n // 2 if n > 1 else 0
        while n - lo > 1:
            mid = (lo + n) // 2
            if lhs >= rhs_unit * mid ** 4:
                lo = mid
            else:
                n = mid
        return n

    def to_json(self) -> dict:
        return {
            "alpha_scale": format_rational(self.alpha_scale),
            "beta_scale": format_rational(self.beta_scale),
            "degree": 4,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Schedule":
        degree = data.get("degree", 4)
        if degree != 4:
            raise ValueError(f"schedule degree must be 4, got {degree}")
        return cls(
            parse_rational(data.get("alpha_scale", "1/1")),
            parse_rational(data.get("beta_scale", "1/1")),
        )


@lru_cache(maxsize=4096)
def _cached_pair(schedule: "Schedule", n: int) -> AlphaBetaPair:
    return AlphaBetaPair(schedule.alpha_at(n), schedule.beta_at(n))


DEFAULT_SCHEDULE = Schedule()


@dataclass(frozen=True)
class RadiusCertificate:
    """A certified positive rational lower bound for a neighborhood radius.

    `bound` is the largest rational with denominator <= den_cap that exact
    comparisons certify to be <= the true radius (if the radius is smaller
    than 1/den_cap, the cap is exceeded to keep the bound positive).
    `components` records the constituent quantities so the minimum can be
    re-checked in isolation.
    """

    kind: str
    bound: Fraction
    components: dict = field(compare=False)

    def __post_init__(self):
        if self.bound <= 0:
            raise ValueError("certificate bound must be positive")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "bound": format_rational(self.bound),
            "components": {k: _component_json(v) for k, v in self.components.items()},
        }


def _component_json(value):
    if isinstance(value, RootExpr):
        return value.to_json()
    if isinstance(value, Fraction):
        return format_rational(value)
    return value


def in_E_alpha(x: Point, alpha: RootValue) -> bool:
    """Membership in the set of points whose prefix norms never exceed alpha."""
    return m_index(x, alpha) is None


def in_A(x: Point, pair: AlphaBetaPair) -> bool:
    """Membership in the building-block set for (alpha, beta)."""
    return first_violating_index(x, pair) is None


def first_violating_index(x: Point, pair: AlphaBetaPair) -> Optional[int]:
    """Least support index past m with |x_l| >= beta; None if x is in A.

    Runs on the point's integer internals: |x_l| < beta iff
    x_l_num^2 * beta_den < beta_num * D^2.
    """
    m = m_index(x, pair.alpha)
    if m is None:
        return None
    beta_sq = pair.beta_sq
    bn, bd = beta_sq.numerator, beta_sq.denominator
    target = bn * x._den_sq
    nums = x._nums
    for pos, (index, _) in enumerate(x.entries):
        if index > m:
            n = nums[pos]
            if n * n * bd > target:
                return index
    return None


def in_O(x: Point, schedule: Schedule) -> bool:
    """Membership in the schedule intersection, decided finitely.

    For n >= N(x) (the least n with norm_sq < alpha_n^2) membership in the
    n-th set is automatic because the whole point lies inside the alpha_n
    ball, so only n < N(x) need an explicit check.
    """
    return first_failing_n(x, schedule) is None


def first_failing_n(x: Point, schedule: Schedule) -> Optional[int]:
    """Least schedule index whose A-set excludes x; None when x is in O."""
    cutoff = schedule.least_n_with_alpha_above(x.norm_sq())
    for n in range(1, cutoff):
        if not in_A(x, schedule.pair_at(n)):
            return n
    return None


def closedness_radius(z: Point, pair: AlphaBetaPair,
                      den_cap: int = DEFAULT_DEN_CAP) -> RadiusCertificate:
    """Certified radius around z whose whole ball stays outside A.

    Requires z outside A: m exists and some coordinate past it reaches
    beta. l0 is the least such support index (the strict inequality
    |z_l0| > beta is automatic: the coordinate is rational, beta is not).
    The radius is min(|z_l0| - beta, prefix-norm margin over alpha).
    """
    m = m_index(z, pair.alpha)
    l0 = first_violating_index(z, pair)
    if m is None or l0 is None:
        raise PreconditionViolatedError("point is inside A; no closedness radius")
    coord_margin = RootExpr.of_rational(abs(z.coordinate(l0))) - pair.beta_expr()
    prefix_margin = sqrt_expr(z.prefix_norm_sq(m)) - pair.alpha_expr()
    radius = expr_min(coord_margin, prefix_margin)
    return RadiusCertificate(
        kind=CertificateKind.CLAIM2_R0,
        bound=largest_rational_at_most(radius, den_cap),
        components={
            "m": m,
            "l0": l0,
            "coordinate_margin": coord_margin,
            "prefix_margin": prefix_margin,
        },
    )


def openness_radius(x: Point, pair: AlphaBetaPair,
                    den_cap: int = DEFAULT_DEN_CAP) -> RadiusCertificate:
    """Certified radius around x whose whole ball stays inside A.

    When m does not exist the point's norm is strictly below alpha (its
    square is rational, alpha^2 is not) and the ball margin alpha - |x| is
    enough. (The boundary branch |x| = alpha of the underlying argument is
    unreachable for finite-support points, so no certificate of that kind
    is ever emitted.) When m exists the radius is
    min(prefix margin, beta/2, h, a) with l0 the least index whose tail
    sum of squares drops below (beta/2)^2, h the closest approach of the
    coordinates up to l0 to beta, and a the previous-prefix margin (the
    sentinel 1 when m = 1, kept verbatim for traceability).
    """
    m = m_index(x, pair.alpha)
    if m is None:
        norm_expr = sqrt_expr(x.norm_sq())
        margin = pair.alpha_expr() - norm_expr
        return RadiusCertificate(
            kind=CertificateKind.CLAIM1_MARGIN,
            bound=largest_rational_at_most(margin, den_cap),
            components={"ball_margin": margin},
        )
    if first_violating_index(x, pair) is not None:
        raise PreconditionViolatedError("point is outside A; no openness radius")

    beta_sq = pair.beta_sq
    quarter_beta_sq = beta_sq / 4
    l0 = 1
    while x.tail_norm_sq(l0) >= quarter_beta_sq:
        l0 += 1

    beta_half = RootExpr.of_root(Fraction(1, 2), pair.beta)

    h_candidates = []
    covered = set()
    for index, value in x.entries:
        if index > l0:
            break
        covered.add(index)
        if value * value < beta_sq:
            h_candidates.append(pair.beta_expr() - RootExpr.of_rational(abs(value)))
        else:
            h_candidates.append(RootExpr.of_rational(abs(value)) - pair.beta_expr())
    if len(covered) < l0:  # some position <= l0 carries a zero coordinate
        h_candidates.append(pair.beta_expr())
    h_expr = expr_min(*h_candidates)

    if m == 1:
        a_expr = RootExpr.of_rational(Fraction(1))
    else:
        a_expr = pair.alpha_expr() - sqrt_expr(x.prefix_norm_sq(m - 1))

    prefix_margin = sqrt_expr(x.prefix_norm_sq(m)) - pair.alpha_expr()
    radius = expr_min(prefix_margin, beta_half, h_expr, a_expr)
    return RadiusCertificate(
        kind=CertificateKind.CLAIM3_R,
        bound=largest_rational_at_most(radius, den_cap),
        components={
            "m": m,
            "l0": l0,
            "prefix_margin": prefix_margin,
            "beta_half": beta_half,
            "h": h_expr,
            "a": a_expr,
        },
    )


def o_openness_radius(x: Point, schedule: Schedule,
                      den_cap: int = DEFAULT_DEN_CAP) -> RadiusCertificate:
    """Certified radius around x whose whole ball stays inside O.

    n0 is the least index with |x| < alpha_n0; the ball of the certified
    bound sits inside every A-set up to n0 and inside the alpha_n0 ball
    around 0, and that neighborhood is contained in O.
    """
    if not in_O(x, schedule):
        raise PreconditionViolatedError("point is outside O; no O-openness radius")
    n0 = schedule.least_n_with_alpha_above(x.norm_sq())
    inner_bounds = {}
    bound = None
    for n in range(1, n0 + 1):
        cert = openness_radius(x, schedule.pair_at(n), den_cap)
        inner_bounds[str(n)] = cert.bound
        bound = cert.bound if bound is None else min(bound, cert.bound)
    ball_margin = (RootExpr.of_root(Fraction(1), schedule.alpha_at(n0))
                   - sqrt_expr(x.norm_sq()))
    ball_bound = largest_rational_at_most(ball_margin, den_cap)
    bound = ball_bound if bound is None else min(bound, ball_bound)
    return RadiusCertificate(
        kind=CertificateKind.CLAIM4_W,
        bound=bound,
        components={
            "n0": n0,
            "per_n_bounds": {k: format_rational(v) for k, v in inner_bounds.items()},
            "ball_margin": ball_margin,
        },
    )
