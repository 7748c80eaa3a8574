"""Lasso traces ``prefix (suffix)^ω`` and covering intervals."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from cegiw.mtl import Interval

State = frozenset


def _smallest_period(word: tuple) -> int:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return p
    return n


@dataclass(frozen=True)
class LassoTrace:
    """Infinite trace ``prefix (suffix)^ω`` over sets of atom names.

    Construction always canonicalises: the suffix is made primitive and
    trailing prefix states equal to the last suffix state are rotated into the
    loop, so equal infinite traces have equal representations.
    """

    prefix: tuple[frozenset[str], ...]
    suffix: tuple[frozenset[str], ...]

    def __post_init__(self):
        prefix = tuple(frozenset(s) for s in self.prefix)
        suffix = tuple(frozenset(s) for s in self.suffix)
        if not suffix:
            raise ValueError("lasso suffix must be nonempty")
        suffix = suffix[: _smallest_period(suffix)]
        while prefix and prefix[-1] == suffix[-1]:
            suffix = (prefix[-1],) + suffix[:-1]
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "suffix", suffix)

    def __len__(self) -> int:
        return len(self.prefix) + len(self.suffix)

    def normalize(self, t: int) -> int:
        """Smallest position with the same future as ``t``."""
        k = len(self.prefix)
        if t < k:
            return t
        return k + (t - k) % len(self.suffix)

    def state_at(self, t: int) -> frozenset[str]:
        k = len(self.prefix)
        if t < k:
            return self.prefix[t]
        return self.suffix[(t - k) % len(self.suffix)]

    def end_index(self, a: int) -> int:
        if a < len(self.prefix):
            return len(self)
        return a + len(self.suffix) - 1

    def covering(self, interval: Interval) -> CoverInterval:
        end = self.end_index(interval.lo)
        hi = end if interval.hi is None else min(interval.hi, end)
        return CoverInterval(interval.lo, hi)

    def to_json(self) -> dict:
        return {
            "prefix": [sorted(s) for s in self.prefix],
            "suffix": [sorted(s) for s in self.suffix],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> LassoTrace:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            tuple(frozenset(s) for s in data["prefix"]),
            tuple(frozenset(s) for s in data["suffix"]),
        )

    def sort_key(self) -> tuple:
        return (
            len(self),
            len(self.suffix),
            [sorted(s) for s in self.prefix + self.suffix],
        )

    def __str__(self):
        def fmt(states):
            return " ".join("{" + ",".join(sorted(s)) + "}" for s in states)

        pre = fmt(self.prefix)
        return f"{pre} ({fmt(self.suffix)})^w" if pre else f"({fmt(self.suffix)})^w"


@dataclass(frozen=True)
class CoverInterval:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty covering interval [{self.lo},{self.hi}]")

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))


def canonicalize(
    prefix: Sequence[Iterable[str]], suffix: Sequence[Iterable[str]]
) -> LassoTrace:
    return LassoTrace(tuple(frozenset(s) for s in prefix), tuple(frozenset(s) for s in suffix))


def state_at(pi: LassoTrace, t: int) -> frozenset[str]:
    return pi.state_at(t)


def end_index(pi: LassoTrace, a: int) -> int:
    return pi.end_index(a)


def covering(pi: LassoTrace, interval: Interval) -> CoverInterval:
    return pi.covering(interval)

