"""The counterexample-guided weakening loop."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from typing import Callable, Union

from cegiw.context import Context, substitute
from cegiw.lasso import LassoTrace
from cegiw.modelcheck.checker import CheckVerdict, HoldsUpToBound, Violated, check_bounded
from cegiw.modelcheck.model import Model
from cegiw.mtl import Formula, Interval, Release, Until, holds, with_interval
from cegiw.weaken import modification_kind, weaken, weakest_of

Checker = Callable[[Model, Formula, int, int], CheckVerdict]


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    interval_before: Interval
    counterexamples: tuple[LassoTrace, ...]
    outcomes: tuple[Interval | None, ...]
    interval_after: Interval | None
    verdict: str
    wall_time_ms: float

    def to_json(self) -> dict:
        def iv(i):
            return None if i is None else [i.lo, i.hi]

        return {
            "iteration": self.iteration,
            "interval_before": iv(self.interval_before),
            "counterexamples": [pi.to_json() for pi in self.counterexamples],
            "outcomes": [iv(o) for o in self.outcomes],
            "interval_after": iv(self.interval_after),
            "verdict": self.verdict,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }


@dataclass(frozen=True)
class Weakened:
    final: Interval
    log: tuple[IterationRecord, ...] = field(default=())


@dataclass(frozen=True)
class NoWeakening:
    witness: LassoTrace
    log: tuple[IterationRecord, ...] = field(default=())


@dataclass(frozen=True)
class BoundOrIterationExhausted:
    log: tuple[IterationRecord, ...] = field(default=())


CegiwResult = Union[Weakened, NoWeakening, BoundOrIterationExhausted]


def _internal(m: Model, phi: Formula, bound: int, max_cex: int) -> CheckVerdict:
    return check_bounded(m, phi, bound, max_cex)


def run_cegiw(
    m: Model,
    c: Context,
    target: Until | Release,
    bound: int,
    max_iterations: int = 64,
    max_counterexamples: int = 8,
    checker: Checker | None = None,
) -> CegiwResult:
    """Weaken ``target``'s interval until ``c[target]`` holds on ``m``.

    Counterexamples seen in earlier rounds are kept; those still violating
    the current candidate are handled before the model is checked again.
    """
    if bound < 1 or max_iterations < 1:
        raise ValueError("bound and max_iterations must be at least 1")
    check = checker or _internal
    kind = modification_kind(target)
    current = target.interval
    retained: list[LassoTrace] = []
    log: list[IterationRecord] = []

    for it in range(1, max_iterations + 1):
        start = time.perf_counter()
        phi = substitute(c, with_interval(target, current))
        cexs = [pi for pi in retained if not holds(pi, phi)]
        summary = "retained"
        if not cexs:
            verdict = check(m, phi, bound, max_counterexamples)
            if isinstance(verdict, HoldsUpToBound):
                log.append(IterationRecord(it, current, (), (), current, "holds", _ms(start)))
                return Weakened(current, tuple(log))
            assert isinstance(verdict, Violated)
            cexs = list(verdict.counterexamples)
            summary = "violated"
            for pi in cexs:
                if holds(pi, phi):
                    raise RuntimeError(f"checker returned a trace that satisfies the property: {pi}")
                if pi not in retained:
                    retained.append(pi)

        cur = with_interval(target, current)
        outcomes = [weaken(c, cur, pi, 0) for pi in cexs]
        for pi, out in zip(cexs, outcomes):
            if out is None:
                log.append(IterationRecord(it, current, tuple(cexs), tuple(outcomes), None, summary, _ms(start)))
                return NoWeakening(pi, tuple(log))
        before, current = current, weakest_of(outcomes, kind)
        log.append(IterationRecord(it, before, tuple(cexs), tuple(outcomes), current, summary, _ms(start)))
    return BoundOrIterationExhausted(tuple(log))


def _ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0


def write_jsonl(log, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in log:
            fh.write(json.dumps(rec.to_json()) + "\n")


def write_csv(log, path) -> None:
    """One row per iteration with the interval after it (``hi`` empty for inf)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "lo", "hi"])
        for rec in log:
            iv = rec.interval_after
            if iv is None:
                continue
            w.writerow([rec.iteration, iv.lo, "" if iv.hi is None else iv.hi])
