"""Command-line surface: membership checks, radius certificates, witness
construction, the incompatibility verdict, and the verification suite.

Exit codes: 0 success / all claims pass, 1 a violation was found,
2 invalid input (malformed rational, invalid root base, empty interval,
precondition failures). Output documents are JSON; files are written
atomically (temp file in the target directory, then rename), and the
ERDOS_REPORT_PRETTY environment variable toggles indentation only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .exact import (
    EmptyIntervalError,
    InvalidRootError,
    RootValue,
    UnsupportedFormError,
    parse_rational,
)
from .space import Point, m_index
from .clopen import (
    DEFAULT_DEN_CAP,
    AlphaBetaPair,
    PreconditionViolatedError,
    Schedule,
    closedness_radius,
    first_failing_n,
    first_violating_index,
    in_A,
    in_E_alpha,
    in_O,
    o_openness_radius,
    openness_radius,
)
from .witness import (
    InvalidEpsilonError,
    ScheduleExhaustedError,
    SourceFailureError,
    VSpec,
    construct_witness,
    file_source,
    ray_source,
    refute_group_compatibility,
)
from .harness import (
    InvalidParamsError,
    SampleConfig,
    run_suite,
    suite_exit_status,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INVALID = 2

_INPUT_ERRORS = (
    ValueError,
    KeyError,
    InvalidRootError,
    UnsupportedFormError,
    EmptyIntervalError,
    PreconditionViolatedError,
    SourceFailureError,
    ScheduleExhaustedError,
    InvalidEpsilonError,
    InvalidParamsError,
    json.JSONDecodeError,
    OSError,
)


def _dumps(document) -> str:
    if os.environ.get("ERDOS_REPORT_PRETTY"):
        return json.dumps(document, indent=2) + "\n"
    return json.dumps(document, separators=(",", ":")) + "\n"


def _atomic_write(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."),
                               prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(document, out_path=None) -> None:
    text = _dumps(document)
    if out_path:
        _atomic_write(out_path, text)
    sys.stdout.write(text)


def _load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _load_point(path: str) -> Point:
    return Point.from_json(_load_json(path))


def _load_schedule(name: str) -> Schedule:
    if name == "default":
        return Schedule()
    return Schedule.from_json(_load_json(name))


def _pair_from_args(args) -> AlphaBetaPair:
    alpha = RootValue(parse_rational(args.alpha_base), 4)
    beta = RootValue(parse_rational(args.beta_base), 2)
    return AlphaBetaPair(alpha, beta)


def _source_from_arg(arg: str):
    if arg == "ray":
        return ray_source()
    if arg.startswith("file:"):
        data = _load_json(arg[len("file:"):])
        if not isinstance(data, list):
            raise ValueError("point file must hold a JSON array of points")
        return file_source([Point.from_json(item) for item in data])
    raise ValueError(f"unknown source {arg!r} (expected 'ray' or 'file:PATH')")


def _cmd_check(args) -> int:
    point = _load_point(args.point)
    if args.set == "Ealpha":
        alpha = RootValue(parse_rational(args.alpha_base), 4)
        member = in_E_alpha(point, alpha)
        trace = {"m_index": m_index(point, alpha)}
    elif args.set == "A":
        pair = _pair_from_args(args)
        member = in_A(point, pair)
        trace = {
            "m_index": m_index(point, pair.alpha),
            "first_violating_index": first_violating_index(point, pair),
        }
    else:  # O
        schedule = _load_schedule(args.schedule)
        member = in_O(point, schedule)
        trace = {
            "first_failing_n": first_failing_n(point, schedule),
            "alpha_cutoff": schedule.least_n_with_alpha_above(point.norm_sq()),
        }
    _emit({"member": member, "set": args.set, "trace": trace}, args.out)
    return EXIT_OK


def _cmd_radius(args) -> int:
    point = _load_point(args.point)
    if args.kind == "o-open":
        schedule = _load_schedule(args.schedule)
        cert = o_openness_radius(point, schedule, args.den_cap)
    else:
        pair = _pair_from_args(args)
        if args.kind == "closed":
            cert = closedness_radius(point, pair, args.den_cap)
        else:
            cert = openness_radius(point, pair, args.den_cap)
    _emit(cert.to_json(), args.out)
    return EXIT_OK


def _cmd_witness(args) -> int:
    schedule = _load_schedule(args.schedule)
    v = VSpec(parse_rational(args.ball_radius), _source_from_arg(args.source),
              label=args.source)
    record = construct_witness(v, schedule)
    _emit(record.to_json(), args.out)
    return EXIT_OK


def _cmd_refute(args) -> int:
    schedule = _load_schedule(args.schedule)
    v = VSpec(parse_rational(args.ball_radius), _source_from_arg(args.source),
              label=args.source)
    verdict = refute_group_compatibility(v, schedule)
    _emit(verdict.to_json(), args.out)
    return EXIT_OK if verdict.holds else EXIT_VIOLATION


_CLAIM_ALIASES = {"1": "C1", "2": "C2", "3": "C3", "4": "C4", "5": "C5",
                  "remark": "Remark"}


def _cmd_verify(args) -> int:
    schedule = _load_schedule(args.schedule)
    claims = []
    for token in args.claims.split(","):
        token = token.strip()
        if token.lower() not in _CLAIM_ALIASES:
            raise InvalidParamsError(
                f"unknown claim {token!r} (expected 1,2,3,4,5,remark)")
        claims.append(_CLAIM_ALIASES[token.lower()])
    config = SampleConfig(
        max_support=args.max_support,
        max_index=args.max_index,
        max_numerator=args.max_numerator,
        max_denominator=args.max_denominator,
        seed=args.seed,
        count=args.samples,
        count_inner=args.inner,
    )
    reports = run_suite(schedule, config, tuple(claims))
    document = [report.to_json(include_timing=args.timings) for report in reports]
    _emit(document, args.report)
    return suite_exit_status(reports)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erdos-clopen",
        description=(
            "Exact membership checks, neighborhood-radius certificates, and "
            "additive counterexamples for clopen sets of the rational l2 "
            "sequence space. All numeric flags take exact p/q syntax."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pair_flags(p):
        p.add_argument("--alpha-base", default="2", metavar="P/Q",
                       help="base of the degree-4 alpha root (default 2)")
        p.add_argument("--beta-base", default="1/2", metavar="P/Q",
                       help="base of the degree-2 beta root (default 1/2)")

    def add_schedule_flag(p):
        p.add_argument("--schedule", default="default", metavar="S",
                       help="'default' or a schedule JSON file")

    def add_out_flag(p):
        p.add_argument("--out", metavar="PATH", help="also write the JSON here")

    check = sub.add_parser("check", help="decide membership of a point")
    check.add_argument("--point", required=True, metavar="P.json")
    check.add_argument("--set", required=True, choices=("Ealpha", "A", "O"))
    add_pair_flags(check)
    add_schedule_flag(check)
    add_out_flag(check)
    check.set_defaults(handler=_cmd_check)

    radius = sub.add_parser("radius", help="emit a radius certificate")
    radius.add_argument("--point", required=True, metavar="P.json")
    radius.add_argument("--kind", required=True, choices=("closed", "open", "o-open"))
    radius.add_argument("--den-cap", type=int, default=DEFAULT_DEN_CAP,
                        metavar="N", help="denominator cap for the bound")
    add_pair_flags(radius)
    add_schedule_flag(radius)
    add_out_flag(radius)
    radius.set_defaults(handler=_cmd_radius)

    witness = sub.add_parser("witness", help="construct one V+V counterexample")
    witness.add_argument("--ball-radius", required=True, metavar="P/Q")
    witness.add_argument("--source", default="ray", metavar="SRC",
                         help="'ray' or 'file:PTS.json'")
    add_schedule_flag(witness)
    witness.add_argument("--out", metavar="W.json")
    witness.set_defaults(handler=_cmd_witness)

    refute = sub.add_parser("refute", help="full incompatibility verdict")
    refute.add_argument("--ball-radius", required=True, metavar="P/Q")
    refute.add_argument("--source", default="ray", metavar="SRC")
    add_schedule_flag(refute)
    refute.add_argument("--out", metavar="V.json")
    refute.set_defaults(handler=_cmd_refute)

    verify = sub.add_parser("verify", help="run the claim-verification suite")
    verify.add_argument("--claims", default="1,2,3,4,5,remark")
    verify.add_argument("--samples", type=int, default=10000, metavar="N")
    verify.add_argument("--seed", type=int, default=42, metavar="K")
    verify.add_argument("--inner", type=int, default=16, metavar="M",
                        help="perturbations per certified radius")
    verify.add_argument("--max-support", type=int, default=6)
    verify.add_argument("--max-index", type=int, default=12)
    verify.add_argument("--max-numerator", type=int, default=8)
    verify.add_argument("--max-denominator", type=int, default=8)
    verify.add_argument("--timings", action="store_true",
                        help="fill elapsed_ms (breaks byte-determinism)")
    verify.add_argument("--report", metavar="R.json")
    add_schedule_flag(verify)
    verify.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _INPUT_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
