"""Optimal right-bound weakening of one interval against a single lasso trace.

``weaken(c, target, pi, t)`` returns the strongest right-bound modification
``I'`` of ``target.interval`` such that ``pi, t |= c[target with I']``, or
``None`` when no modification works. Until targets are extended, Release
targets are contracted; the lower bound never changes.

Every scan over an interval is cut at the covering index of the lasso, so
all loops are finite even for unbounded intervals.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from cegiw.context import (
    AndL,
    AndR,
    Context,
    Hole,
    OrL,
    OrR,
    ReleaseL,
    ReleaseR,
    UntilL,
    UntilR,
)
from cegiw.lasso import LassoTrace
from cegiw.mtl import Formula, Interval, Release, Until, eval_formula


class ModificationKind(enum.Enum):
    EXTENSION = "extension"
    CONTRACTION = "contraction"


def modification_kind(target: Until | Release) -> ModificationKind:
    if isinstance(target, Until):
        return ModificationKind.EXTENSION
    return ModificationKind.CONTRACTION


def weakest_of(intervals: Iterable[Interval], kind: ModificationKind) -> Interval:
    intervals = list(intervals)
    if not intervals:
        raise ValueError("weakest_of() needs at least one interval")
    if kind is ModificationKind.EXTENSION:
        return max(intervals, key=lambda i: i.hi_key)
    return min(intervals, key=lambda i: i.hi_key)


def strongest_of(intervals: Iterable[Interval], kind: ModificationKind) -> Interval:
    intervals = list(intervals)
    if not intervals:
        raise ValueError("strongest_of() needs at least one interval")
    if kind is ModificationKind.EXTENSION:
        return min(intervals, key=lambda i: i.hi_key)
    return max(intervals, key=lambda i: i.hi_key)


@dataclass
class WorkCounter:
    """Counts trace positions visited by the recursion."""

    positions: int = 0


def _offsets(pi: LassoTrace, t: int, j: Interval) -> range:
    end = pi.end_index(t + j.lo) - t
    hi = end if j.hi is None else min(j.hi, end)
    return range(j.lo, hi + 1)


def _tick(stats: WorkCounter | None) -> None:
    if stats is not None:
        stats.positions += 1


def weaken(
    c: Context,
    target: Until | Release,
    pi: LassoTrace,
    t: int = 0,
    stats: WorkCounter | None = None,
) -> Interval | None:
    if isinstance(c, Hole):
        if isinstance(target, Until):
            return weaken_u_direct(target.left, target.right, target.interval, pi, t, stats)
        return weaken_r_direct(target.left, target.right, target.interval, pi, t, stats)
    if isinstance(c, (AndL, AndR)):
        _tick(stats)
        if not eval_formula(pi, t, c.phi):
            return None
        return weaken(c.ctx, target, pi, t, stats)
    if isinstance(c, (OrL, OrR)):
        _tick(stats)
        if eval_formula(pi, t, c.phi):
            return target.interval
        return weaken(c.ctx, target, pi, t, stats)
    if isinstance(c, UntilL):
        return weaken_u_left(c.ctx, c.phi, c.interval, target, pi, t, stats)
    if isinstance(c, UntilR):
        return weaken_u_right(c.phi, c.ctx, c.interval, target, pi, t, stats)
    if isinstance(c, ReleaseL):
        return weaken_r_left(c.ctx, c.phi, c.interval, target, pi, t, stats)
    if isinstance(c, ReleaseR):
        return weaken_r_right(c.phi, c.ctx, c.interval, target, pi, t, stats)
    raise TypeError(f"not a context: {c!r}")


def weaken_u_direct(
    psi_l: Formula,
    psi_r: Formula,
    i: Interval,
    pi: LassoTrace,
    t: int,
    stats: WorkCounter | None = None,
) -> Interval | None:
    # Scan past b up to the covering end: the first psi_r hit fixes the bound.
    for k in _offsets(pi, t, Interval(i.lo)):
        _tick(stats)
        if eval_formula(pi, t + k, psi_r):
            return i if i.hi is None else i.with_hi(max(i.hi, k))
        if not eval_formula(pi, t + k, psi_l):
            break
    return None


def weaken_r_direct(
    psi_l: Formula,
    psi_r: Formula,
    i: Interval,
    pi: LassoTrace,
    t: int,
    stats: WorkCounter | None = None,
) -> Interval | None:
    for k in _offsets(pi, t, i):
        _tick(stats)
        if not eval_formula(pi, t + k, psi_r):
            # first unreleased psi_r failure: the interval must stop before it
            return None if k == i.lo else i.with_hi(k - 1)
        if eval_formula(pi, t + k, psi_l):
            break
    return i


def weaken_u_left(
    c: Context,
    phi: Formula,
    j: Interval,
    target: Until | Release,
    pi: LassoTrace,
    t: int,
    stats: WorkCounter | None = None,
) -> Interval | None:
    kind = modification_kind(target)
    needed = []
    for k in _offsets(pi, t, j):
        _tick(stats)
        if eval_formula(pi, t + k, phi):
            if k == j.lo:
                return target.interval
            return weakest_of(needed, kind)
        found = weaken(c, target, pi, t + k, stats)
        if found is None:
            return None
        needed.append(found)
    return None


def weaken_u_right(
    phi: Formula,
    c: Context,
    j: Interval,
    target: Until | Release,
    pi: LassoTrace,
    t: int,
    stats: WorkCounter | None = None,
) -> Interval | None:
    kind = modification_kind(target)
    best = None
    for k in _offsets(pi, t, j):
        _tick(stats)
        found = weaken(c, target, pi, t + k, stats)
        if found is not None:
            best = found if best is None else strongest_of([best, found], kind)
            if best == target.interval:
                return best
        if not eval_formula(pi, t + k, phi):
            break
    return best


def weaken_r_left(
    c: Context,
    phi: Formula,
    j: Interval,
    target: Until | Release,
    pi: LassoTrace,
    t: int,
    stats: WorkCounter | None = None,
) -> Interval | None:
    kind = modification_kind(target)
    offsets = _offsets(pi, t, j)
    first_fail = next((k for k in offsets if not eval_formula(pi, t + k, phi)), None)
    if first_fail is None:
        _tick(stats)
        return target.interval
    best = None
    for k in range(j.lo, first_fail):
        _tick(stats)
        found = weaken(c, target, pi, t + k, stats)
        if found is not None:
            best = found if best is None else strongest_of([best, found], kind)
            if best == target.interval:
                return best
    return best


def weaken_r_right(
    phi: Formula,
    c: Context,
    j: Interval,
    target: Until | Release,
    pi: LassoTrace,
    t: int,
    stats: WorkCounter | None = None,
) -> Interval | None:
    # The hole must hold on a prefix of J ending at the first phi point, or on
    # all of J. Requirements accumulate, so the first release point is the
    # strongest candidate and the invariant branch the weakest.
    kind = modification_kind(target)
    needed = None
    for k in _offsets(pi, t, j):
        _tick(stats)
        found = weaken(c, target, pi, t + k, stats)
        if found is None:
            return None
        needed = found if needed is None else weakest_of([needed, found], kind)
        if eval_formula(pi, t + k, phi):
            return needed
    return needed
