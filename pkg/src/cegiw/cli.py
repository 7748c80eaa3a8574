"""Command-line front end.

Exit status: 0 weakened, 1 no weakening exists, 2 iteration limit reached,
3 usage, parse or model error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Union

from cegiw.context import ContextError, extract, substitute
from cegiw.driver import (
    BoundOrIterationExhausted,
    NoWeakening,
    Weakened,
    run_cegiw,
    write_csv,
    write_jsonl,
)
from cegiw.modelcheck import ExternalChecker, ExternalCheckerError, ModelError, Violated, load_model
from cegiw.mtl import Formula, Interval, eventually, globally, with_interval
from cegiw.parser import ParseError, parse_property
from cegiw.weaken import modification_kind

EXIT_WEAKENED, EXIT_NONE, EXIT_EXHAUSTED, EXIT_USAGE = 0, 1, 2, 3
ENV_CHECKER = "CEGIW_EXTERNAL_CHECKER"


# --- timing phrases -----------------------------------------------------------


@dataclass(frozen=True)
class Within:
    n: int


@dataclass(frozen=True)
class For:
    n: int


@dataclass(frozen=True)
class Eventually:
    pass


@dataclass(frozen=True)
class Always:
    pass


FretishTiming = Union[Within, For, Eventually, Always]


def timing_to_mtl(timing: FretishTiming, response: Formula) -> Formula:
    if isinstance(timing, Within):
        return eventually(Interval(0, timing.n), response)
    if isinstance(timing, For):
        if timing.n < 1:
            raise ValueError("'for' needs a duration of at least 1")
        return globally(Interval(1, timing.n), response)
    if isinstance(timing, Eventually):
        return eventually(Interval(0), response)
    if isinstance(timing, Always):
        return globally(Interval(0), response)
    raise TypeError(f"unknown timing {timing!r}")


# --- argument handling --------------------------------------------------------------


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="cegiw", description="Counterexample-guided interval weakening.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    check = sub.add_parser("check", help="weaken the ?-marked interval until the property holds")
    check.add_argument("--model", required=True, help="model file")
    check.add_argument("--prop", required=True, help="property text, or @file")
    check.add_argument("--bound", required=True, type=_positive, help="maximum lasso length")
    check.add_argument("--max-iterations", type=_positive, default=64)
    check.add_argument("--max-counterexamples", type=_positive, default=8)
    check.add_argument("--backend", choices=("internal", "external"), default="internal")
    check.add_argument("--external-cmd", help=f"checker executable (default: ${ENV_CHECKER})")
    check.add_argument("--log-json", metavar="PATH", help="write one JSON record per iteration")
    check.add_argument("--log-csv", metavar="PATH", help="write iteration,lo,hi rows")
    check.add_argument("--quiet", action="store_true", help="print only the result line")
    return parser


def read_property(arg: str) -> str:
    if not arg.startswith("@"):
        return arg
    with open(arg[1:], encoding="utf-8") as fh:
        lines = [l for l in fh.read().splitlines() if not l.lstrip().startswith("#")]
    return "\n".join(lines)


def _make_checker(args):
    if args.backend == "internal":
        return None
    cmd = args.external_cmd or os.environ.get(ENV_CHECKER)
    if not cmd:
        raise UsageError(f"--backend external needs --external-cmd or ${ENV_CHECKER}")
    ext = ExternalChecker(cmd)

    def check(m, phi, bound, max_cex):
        verdict = ext.check(m, phi, bound)
        if isinstance(verdict, Violated):
            return Violated(verdict.counterexamples[:max_cex])
        return verdict

    return check


def _check(args, out, err) -> int:
    model = load_model(args.model)
    phi, path = parse_property(read_property(args.prop))
    c, target = extract(phi, path)
    result = run_cegiw(
        model,
        c,
        target,
        args.bound,
        max_iterations=args.max_iterations,
        max_counterexamples=args.max_counterexamples,
        checker=_make_checker(args),
    )
    if args.log_json:
        write_jsonl(result.log, args.log_json)
    if args.log_csv:
        write_csv(result.log, args.log_csv)

    direction = modification_kind(target).value
    n = len(result.log)
    if isinstance(result, Weakened):
        print(substitute(c, with_interval(target, result.final)), file=out)
        if not args.quiet:
            print(
                f"interval {target.interval} -> {result.final} ({direction}), "
                f"{n} iteration(s), holds up to bound {args.bound}",
                file=out,
            )
        return EXIT_WEAKENED
    if isinstance(result, NoWeakening):
        print("no weakening exists", file=out)
        if not args.quiet:
            print(f"witness: {result.witness}", file=out)
            print(f"target interval {target.interval} ({direction}), {n} iteration(s)", file=out)
        return EXIT_NONE
    assert isinstance(result, BoundOrIterationExhausted)
    last = result.log[-1].interval_after if result.log else target.interval
    print(f"iteration limit reached after {n} iteration(s); last interval {last}", file=err)
    return EXIT_EXHAUSTED


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _check(args, out, err)
    except UsageError as exc:
        print(f"cegiw: error: {exc}", file=err)
    except (ParseError, ContextError, ModelError, ExternalCheckerError) as exc:
        print(f"cegiw: {exc}", file=err)
    except OSError as exc:
        print(f"cegiw: {exc.filename or ''}: {exc.strerror or exc}", file=err)
    except RuntimeError as exc:
        print(f"cegiw: internal error: {exc}", file=err)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
