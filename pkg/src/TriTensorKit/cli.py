"""Command-line interface: `tritensor {gen,analyze,verify,cremona,en}`.

Standard output carries only JSON (indented, keys sorted); diagnostics go to the log on standard error. Exit codes are
0 when every check passes, 1 when a check fails and 2 on malformed input.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from .cremona import NN2_DESK_BOUND, DivisorClass, dcheck, enumerate_nn2, exhaustive_check, is_nn2, reduce
from .eagon_northcott import (
    InconclusiveExactnessError,
    cokernel_dimension,
    en_complex,
    hilbert_function,
    verify_dd_zero,
    verify_generic_exactness,
)
from .exact import FieldTag, TriTensorError
from .generators import DEFAULT_BOUND, FIXTURES, KINDS, GeneratorSpec
from .report import SUITES, Analyzer, verify
from .scan import DEFAULT_SCAN_PRIME
from .tensor import TensorFormatError, TriTensor
from .utils import parse_int_list, parse_name_list, parse_points, parse_range

logger = logging.getLogger("TriTensorKit")

EXIT_OK, EXIT_FAILURE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Raised for malformed command-line input, mapped to exit code 2."""


def _emit(data: Any, out: Optional[str]) -> None:
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load_tensor(path: str) -> TriTensor:
    try:
        raw = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        return TriTensor.from_json(json.loads(raw))
    except (OSError, json.JSONDecodeError, TensorFormatError) as err:
        raise InputError(f"Cannot read tensor from {path}: {err}") from err


def cmd_gen(args: argparse.Namespace) -> int:
    kind = "fixture" if args.fixture else "from-points" if args.points else args.kind
    points = tuple(parse_points(args.points)) if args.points else None
    spec = GeneratorSpec(kind, args.seed, FieldTag.parse(args.field), args.bound, args.fixture, points)
    _emit(spec.build().to_json(), args.out)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    tensor = _load_tensor(args.tensor)
    analyzer = Analyzer(scan_prime=args.scan_prime, skip=sorted(parse_name_list(args.skip)), timing=not args.no_timing)
    report = analyzer.analyze(tensor)
    _emit(report, args.out)
    return EXIT_OK if report["summary"]["ok"] else EXIT_FAILURE


def cmd_verify(args: argparse.Namespace) -> int:
    summary = verify(args.suite, args.trials, args.seed, args.scan_prime)
    _emit(summary, args.out)
    return EXIT_OK if summary["ok"] else EXIT_FAILURE


def cmd_cremona(args: argparse.Namespace) -> int:
    if args.enumerate is not None:
        solutions = enumerate_nn2(args.enumerate)
        summary = exhaustive_check(args.enumerate, solutions)
        summary["classes"] = [str(c) for c in solutions]
        _emit(summary, args.out)
        return EXIT_OK if summary["ok"] else EXIT_FAILURE
    if args.divisor_class is None:
        raise InputError("Give a class 'n:a1,...,a6' or --enumerate N")
    c = DivisorClass.parse(args.divisor_class)
    if not is_nn2(c):
        raise InputError(f"{c} does not satisfy n^2 = sum a_i^2 + 4 and 3n = sum a_i + 6")
    trace = reduce(c)
    d, dh, dd = dcheck(c)
    _emit({"class": str(c), **trace.to_json(), "D": str(d), "DH": dh, "D2": dd}, args.out)
    return EXIT_OK


def cmd_en(args: argparse.Namespace) -> int:
    tensor = _load_tensor(args.tensor)
    order = parse_int_list(args.order) if args.order else None
    c = en_complex(tensor, args.twist, order)
    degrees = parse_range(args.degrees)
    dd = verify_dd_zero(c)
    try:
        exactness = verify_generic_exactness(c, samples=args.samples, seed=args.seed)
        exact = {"ok": exactness.ok, "checked": len(exactness.checked), "skipped": exactness.skipped}
    except InconclusiveExactnessError as err:
        exact = {"ok": False, "checked": 0, "skipped": args.samples, "reason": str(err)}
    result = {
        **c.to_json(),
        "dd_zero": dd.ok,
        "first_nonzero": None if dd.first_nonzero is None else list(dd.first_nonzero),
        "exactness": exact,
        "hilbert_function": hilbert_function(c, degrees).to_json(),
        "cokernel_dimensions": {str(d): cokernel_dimension(c, d) for d in degrees},
    }
    _emit(result, args.out)
    return EXIT_OK if dd.ok and exact["ok"] else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tritensor", description="Exact toolkit for (3,3,4) tensors and cubic surfaces.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Increase log verbosity (-v info, -vv debug)")
    commands = parser.add_subparsers(dest="command", required=True)

    def with_out(sub: argparse.ArgumentParser) -> argparse.ArgumentParser:
        sub.add_argument("--out", help="Write JSON to this file instead of standard output")
        return sub

    gen = with_out(commands.add_parser("gen", help="Generate a tensor"))
    gen.add_argument("--kind", choices=KINDS, default="random-entries")
    gen.add_argument("--fixture", choices=sorted(FIXTURES))
    gen.add_argument("--points", help="Six points, e.g. '(1:0:0),(0:1:0),...'")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--field", default="Q", help="'Q' or 'Fp:<p>'")
    gen.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    gen.set_defaults(handler=cmd_gen)

    analyze = with_out(commands.add_parser("analyze", help="Run every check on a tensor"))
    analyze.add_argument("tensor", help="Tensor JSON file, '-' for standard input")
    analyze.add_argument("--scan-prime", type=int, default=DEFAULT_SCAN_PRIME)
    analyze.add_argument("--skip", help="Comma separated checks to skip")
    analyze.add_argument("--no-timing", action="store_true", help="Omit timings for byte-stable reports")
    analyze.set_defaults(handler=cmd_analyze)

    verify_ = with_out(commands.add_parser("verify", help="Run verification suites"))
    verify_.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    verify_.add_argument("--trials", type=int, default=10)
    verify_.add_argument("--seed", type=int, default=0)
    verify_.add_argument("--scan-prime", type=int, default=DEFAULT_SCAN_PRIME)
    verify_.set_defaults(handler=cmd_verify)

    cremona = with_out(commands.add_parser("cremona", help="Reduce a divisor class by Cremona transformations"))
    cremona.add_argument("divisor_class", nargs="?", help="Class as 'n:a1,a2,a3,a4,a5,a6'")
    cremona.add_argument("--enumerate", type=int, metavar="N", help=f"Enumerate and reduce all classes with n <= N <= {NN2_DESK_BOUND}")
    cremona.set_defaults(handler=cmd_cremona)

    en = with_out(commands.add_parser("en", help="Build and check an Eagon-Northcott type complex"))
    en.add_argument("tensor", help="Tensor JSON file, '-' for standard input")
    en.add_argument("--twist", type=int, default=1)
    en.add_argument("--order", help="Leg order, e.g. '2,0,1'")
    en.add_argument("--degrees", default="0:6", help="Inclusive degree range 'low:high'")
    en.add_argument("--samples", type=int, default=20)
    en.add_argument("--seed", type=int, default=0)
    en.set_defaults(handler=cmd_en)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the `tritensor` command, returning the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except (InputError, ValueError) as err:
        logger.error("%s", err)
        return EXIT_INPUT
    except TriTensorError as err:
        logger.error("%s: %s", type(err).__name__, err)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
