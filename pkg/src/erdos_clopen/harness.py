"""Deterministic sampling and the desk-scale claim-verification suite.

Every claim here is a theorem, so the suite is a falsification harness for
the implementation: a violation report always indicates a bug and carries
enough data (points, certificate, comparison trace) to replay the failed
check in isolation. Sampling is a pure function of (config, draw index);
reports are deterministic functions of (schedule, config).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Optional

from .exact import format_rational
from .space import Point, add, scale, unit
from .clopen import (
    AlphaBetaPair,
    Schedule,
    closedness_radius,
    first_failing_n,
    in_A,
    in_O,
    o_openness_radius,
    openness_radius,
)
from .witness import (
    VSpec,
    construct_witness,
    generalized_witness,
    ray_source,
    verify_witness,
)


class InvalidParamsError(Exception):
    """Claim id or parameters outside the suite's contract."""


_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """splitmix64 (Steele et al.): 64-bit state, fixed mixing constants.

    Chosen over random.Random so that draws, and therefore report bytes,
    are identical on every platform and Python version.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError(f"below() needs n >= 1, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n


def derive_seed(seed: int, *salts: int) -> int:
    """Deterministic sub-stream seed from a master seed and integer salts."""
    h = SplitMix64(seed).next_u64()
    for salt in salts:
        h = SplitMix64(h ^ ((salt * _GOLDEN) & _MASK64)).next_u64()
    return h


@dataclass(frozen=True)
class SampleConfig:
    """Caps and seed for deterministic point sampling."""

    max_support: int = 6
    max_index: int = 12
    max_numerator: int = 8
    max_denominator: int = 8
    seed: int = 0
    count: int = 10000
    count_inner: int = 16

    def __post_init__(self):
        if self.max_support < 0:
            raise InvalidParamsError("max_support must be >= 0")
        for name in ("max_index", "max_numerator", "max_denominator"):
            if getattr(self, name) < 1:
                raise InvalidParamsError(f"{name} must be >= 1")
        if self.count < 0 or self.count_inner < 0:
            raise InvalidParamsError("count and count_inner must be >= 0")

    def to_json(self) -> dict:
        return {
            "max_support": self.max_support,
            "max_index": self.max_index,
            "max_numerator": self.max_numerator,
            "max_denominator": self.max_denominator,
            "seed": self.seed,
            "count": self.count,
            "count_inner": self.count_inner,
        }


def _sample_point_with(rng: SplitMix64, config: SampleConfig) -> Point:
    size = rng.below(min(config.max_support, config.max_index) + 1)
    indices = []
    pool = list(range(1, config.max_index + 1))
    for _ in range(size):
        pick = rng.below(len(pool))
        indices.append(pool.pop(pick))
    entries = []
    for index in sorted(indices):
        magnitude = 1 + rng.below(config.max_numerator)
        sign = -1 if rng.below(2) else 1
        den = 1 + rng.below(config.max_denominator)
        entries.append((index, Fraction(sign * magnitude, den)))
    return Point(entries)


def sample_point(config: SampleConfig, draw: int) -> Point:
    """Deterministic pseudo-random finite-support point for one draw.

    Support size is uniform on [0, max_support], indices are distinct in
    [1, max_index], and coordinates are nonzero p/q within the caps. The
    draw index seeds an independent stream, so draws can be generated in
    any order.
    """
    if draw < 0 or draw >= config.count:
        raise InvalidParamsError(f"draw {draw} outside [0, {config.count})")
    return _sample_point_with(SplitMix64(derive_seed(config.seed, draw)), config)


def _sample_rational_positive(rng: SplitMix64, config: SampleConfig) -> Fraction:
    num = 1 + rng.below(config.max_numerator)
    den = 1 + rng.below(config.max_denominator)
    return Fraction(num, den)


def _scaled_within(direction: Point, bound: Fraction) -> Point:
    """Scale a direction so its norm is certified strictly below bound."""
    if direction.is_zero():
        return direction
    norm_sq = direction.norm_sq()
    root_ceil = isqrt(norm_sq.numerator // norm_sq.denominator) + 1
    factor = bound / (2 * root_ceil)
    while factor * factor * norm_sq >= bound * bound:  # exact fit check
        factor /= 2
    return scale(factor, direction)


def perturb_within(base: Point, bound: Fraction, rng: SplitMix64,
                   config: SampleConfig) -> Point:
    """base plus a sampled direction scaled exactly inside the bound."""
    return add(base, _scaled_within(_sample_point_with(rng, config), bound))


CLAIM_IDS = ("C1", "C2", "C3", "C4", "C5", "Remark")


@dataclass
class ClaimReport:
    """Outcome of one claim's sampled verification; empty violations = pass."""

    claim: str
    samples_run: int
    eligible: int
    violations: list = field(default_factory=list)
    elapsed_ms: Optional[int] = None
    config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self, include_timing: bool = False) -> dict:
        # elapsed_ms stays null unless timing is requested, so reports are
        # byte-identical across same-seed runs
        return {
            "claim": self.claim,
            "samples_run": self.samples_run,
            "eligible": self.eligible,
            "violations": self.violations,
            "elapsed_ms": self.elapsed_ms if include_timing else None,
            "config": self.config,
        }


def _violation(draw: int, point: Optional[Point], detail: str, **extra) -> dict:
    record = {"draw": draw, "detail": detail}
    if point is not None:
        record["point"] = point.to_json()
    record.update({k: (v.to_json() if isinstance(v, Point) else v)
                   for k, v in extra.items()})
    return record


def _verify_c1(pair: AlphaBetaPair, config: SampleConfig) -> ClaimReport:
    """Sampled points with norm below alpha must land in A."""
    report = ClaimReport("C1", config.count, 0)
    alpha_sq_sq = pair.alpha.base  # alpha^4; norm < alpha iff norm_sq^2 < this
    for draw in range(config.count):
        x = sample_point(config, draw)
        norm_sq = x.norm_sq()
        if norm_sq * norm_sq >= alpha_sq_sq:
            continue
        report.eligible += 1
        if not in_A(x, pair):
            report.violations.append(_violation(draw, x, "ball point escaped A"))
    return report


def _verify_c2(pair: AlphaBetaPair, config: SampleConfig) -> ClaimReport:
    """Certified closedness radii around points outside A keep the
    perturbed neighborhood outside A."""
    report = ClaimReport("C2", config.count, 0)
    for draw in range(config.count):
        z = sample_point(config, draw)
        if in_A(z, pair):
            continue
        report.eligible += 1
        cert = closedness_radius(z, pair)
        if cert.bound <= 0:
            report.violations.append(
                _violation(draw, z, "non-positive bound", certificate=cert.to_json()))
            continue
        for inner in range(config.count_inner):
            rng = SplitMix64(derive_seed(config.seed, draw, inner, 2))
            y = perturb_within(z, cert.bound, rng, config)
            if in_A(y, pair):
                report.violations.append(_violation(
                    draw, z, "in-radius perturbation entered A",
                    certificate=cert.to_json(), perturbed=y))
    return report


def _verify_c3(pair: AlphaBetaPair, config: SampleConfig) -> ClaimReport:
    """Certified openness radii around points of A keep the perturbed
    neighborhood inside A."""
    report = ClaimReport("C3", config.count, 0)
    for draw in range(config.count):
        x = sample_point(config, draw)
        if not in_A(x, pair):
            continue
        report.eligible += 1
        cert = openness_radius(x, pair)
        if cert.bound <= 0:
            report.violations.append(
                _violation(draw, x, "non-positive bound", certificate=cert.to_json()))
            continue
        for inner in range(config.count_inner):
            rng = SplitMix64(derive_seed(config.seed, draw, inner, 3))
            y = perturb_within(x, cert.bound, rng, config)
            if not in_A(y, pair):
                report.violations.append(_violation(
                    draw, x, "in-radius perturbation escaped A",
                    certificate=cert.to_json(), perturbed=y))
    return report


def _verify_c4(schedule: Schedule, config: SampleConfig) -> ClaimReport:
    """O contains 0, is stable inside certified radii, and its complement is
    open via the failing pair's closedness radius; the finite membership
    check is insensitive to extending the scanned prefix of the schedule."""
    report = ClaimReport("C4", config.count, 0)
    if not in_O(Point(), schedule):
        report.violations.append(_violation(-1, Point(), "identity escaped O"))
    for draw in range(config.count):
        x = sample_point(config, draw)
        report.eligible += 1
        cutoff = schedule.least_n_with_alpha_above(x.norm_sq())
        member = in_O(x, schedule)
        extended = all(in_A(x, schedule.pair_at(n)) for n in range(1, cutoff + 11))
        if member != extended:
            report.violations.append(_violation(
                draw, x, "finite check changed when extended by 10 indices"))
            continue
        if member:
            cert = o_openness_radius(x, schedule)
            for inner in range(config.count_inner):
                rng = SplitMix64(derive_seed(config.seed, draw, inner, 4))
                y = perturb_within(x, cert.bound, rng, config)
                if not in_O(y, schedule):
                    report.violations.append(_violation(
                        draw, x, "in-radius perturbation escaped O",
                        certificate=cert.to_json(), perturbed=y))
        else:
            n_bad = first_failing_n(x, schedule)
            cert = closedness_radius(x, schedule.pair_at(n_bad))
            for inner in range(config.count_inner):
                rng = SplitMix64(derive_seed(config.seed, draw, inner, 4))
                y = perturb_within(x, cert.bound, rng, config)
                if in_O(y, schedule):
                    report.violations.append(_violation(
                        draw, x, "in-radius perturbation entered O",
                        certificate=cert.to_json(), perturbed=y, failing_n=n_bad))
    return report


def _synthetic_source(rng: SplitMix64, config: SampleConfig):
    """Unbounded source along a sampled direction (e_1 fallback for zero)."""
    direction = _sample_point_with(rng, config)
    if direction.is_zero():
        direction = unit(1 + rng.below(config.max_index))
    return ray_source(direction)


def _verify_c5(schedule: Schedule, config: SampleConfig) -> ClaimReport:
    """Random (r*, source) candidates always yield fully checked witnesses."""
    report = ClaimReport("C5", config.count, config.count)
    for draw in range(config.count):
        rng = SplitMix64(derive_seed(config.seed, draw, 5))
        r_star = _sample_rational_positive(rng, config)
        v = VSpec(r_star, _synthetic_source(rng, config), label=f"sampled-{draw}")
        try:
            record = construct_witness(v, schedule)
        except Exception as exc:  # construction must never fail for valid candidates
            report.violations.append(_violation(
                draw, None, f"construction failed: {exc!r}",
                r_star=format_rational(r_star)))
            continue
        checks = verify_witness(record.x, record.y, record.z, record.m_star,
                                record.l_star, record.q, r_star, schedule)
        for check in checks:
            if not check["holds"]:
                report.violations.append(_violation(
                    draw, record.z, f"witness check failed: {check['check']}",
                    witness=record.to_json()))
    return report


def _verify_remark(schedule: Schedule, config: SampleConfig) -> ClaimReport:
    """Unbounded K plus an arbitrarily small ball still escapes O."""
    report = ClaimReport("Remark", config.count, config.count)
    for draw in range(config.count):
        rng = SplitMix64(derive_seed(config.seed, draw, 6))
        eps = _sample_rational_positive(rng, config)
        source = _synthetic_source(rng, config)
        try:
            record = generalized_witness(source, eps, schedule)
        except Exception as exc:
            report.violations.append(_violation(
                draw, None, f"construction failed: {exc!r}",
                eps=format_rational(eps)))
            continue
        if in_O(record.z, schedule):
            report.violations.append(_violation(
                draw, record.z, "generalized witness landed inside O",
                witness=record.to_json()))
        if record.y.norm_sq() >= eps * eps:
            report.violations.append(_violation(
                draw, record.y, "perturbation not inside the eps ball",
                witness=record.to_json()))
    return report


def verify_claim(claim: str, params, config: SampleConfig) -> ClaimReport:
    """Run one claim's sampled invariant; params is an AlphaBetaPair for
    C1-C3 and a Schedule for C4, C5, and Remark."""
    started = time.monotonic()
    if claim in ("C1", "C2", "C3"):
        if not isinstance(params, AlphaBetaPair):
            raise InvalidParamsError(f"{claim} needs an AlphaBetaPair")
        runner = {"C1": _verify_c1, "C2": _verify_c2, "C3": _verify_c3}[claim]
        report = runner(params, config)
    elif claim in ("C4", "C5", "Remark"):
        if not isinstance(params, Schedule):
            raise InvalidParamsError(f"{claim} needs a Schedule")
        runner = {"C4": _verify_c4, "C5": _verify_c5, "Remark": _verify_remark}[claim]
        report = runner(params, config)
    else:
        raise InvalidParamsError(f"unknown claim {claim!r}")
    report.elapsed_ms = int((time.monotonic() - started) * 1000)
    report.config = {"sample": config.to_json(), "params": params.to_json()}
    return report


def run_suite(schedule: Schedule, config: SampleConfig,
              claims: tuple = CLAIM_IDS) -> list[ClaimReport]:
    """All requested claims with a shared config; C1-C3 use the schedule's
    first threshold pair. Reports come back in claim order."""
    pair = schedule.pair_at(1)
    reports = []
    for claim in claims:
        if claim not in CLAIM_IDS:
            raise InvalidParamsError(f"unknown claim {claim!r}")
        params = pair if claim in ("C1", "C2", "C3") else schedule
        reports.append(verify_claim(claim, params, config))
    return reports


def suite_exit_status(reports: list[ClaimReport]) -> int:
    return 0 if all(report.passed for report in reports) else 1
