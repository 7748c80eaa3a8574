"""Explicit-state bounded checking by lasso enumeration."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from cegiw.lasso import LassoTrace, canonicalize
from cegiw.modelcheck.model import Model
from cegiw.mtl import Formula, holds


@dataclass(frozen=True)
class HoldsUpToBound:
    bound: int


@dataclass(frozen=True)
class Violated:
    counterexamples: tuple[LassoTrace, ...]

    def __post_init__(self):
        if not self.counterexamples:
            raise ValueError("Violated needs at least one counterexample")


CheckVerdict = Union[HoldsUpToBound, Violated]


def _by_projection(m: Model, pairs: Iterable[tuple]) -> dict[frozenset, frozenset]:
    groups = defaultdict(set)
    for anchor, state in pairs:
        groups[m.project(state)].add((anchor, state))
    return {k: frozenset(v) for k, v in groups.items()}


def _collect(m: Model, bound: int) -> list[LassoTrace]:
    """Distinct projected lassos, found by a search over atom words.

    For each loop start ``l`` the search keeps, per word, the pairs
    (state at ``l``, current state) of concrete paths with that projection.
    A lasso exists when some current state has an edge back to its anchor.
    Paths with equal projections are merged, so the work follows the number
    of distinct words rather than the number of concrete paths.
    """
    found: set[LassoTrace] = set()
    for l in range(bound):
        starts = _by_projection(m, [((s if l == 0 else None), s) for s in m.initial_states()])
        stack = [([atoms], pairs) for atoms, pairs in starts.items()]
        while stack:
            word, pairs = stack.pop()
            n = len(word)
            if n > l and any(a in m.successors(c) for a, c in pairs):
                found.add(canonicalize(word[:l], word[l:]))
            if n < bound:
                nxt = _by_projection(
                    m, [((s if n == l else a), s) for a, c in pairs for s in m.successors(c)]
                )
                stack.extend((word + [atoms], group) for atoms, group in nxt.items())
    return sorted(found, key=LassoTrace.sort_key)


def enumerate_lassos(m: Model, bound: int) -> Iterator[LassoTrace]:
    """Distinct canonical lassos of total length <= ``bound``, shortest first."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    cache = m._cache.setdefault("lassos", {})
    if bound not in cache:
        cache[bound] = _collect(m, bound)
    yield from cache[bound]


def check_bounded(m: Model, phi: Formula, bound: int, max_counterexamples: int = 8) -> CheckVerdict:
    if max_counterexamples < 1:
        raise ValueError("max_counterexamples must be at least 1")
    found = []
    for pi in enumerate_lassos(m, bound):
        if not holds(pi, phi):
            found.append(pi)
            if len(found) == max_counterexamples:
                break
    return Violated(tuple(found)) if found else HoldsUpToBound(bound)
