"""MTL syntax, pointwise semantics over lasso traces, and syntactic transforms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable

if TYPE_CHECKING:
    from cegiw.lasso import LassoTrace


@dataclass(frozen=True)
class Interval:
    """Closed interval of naturals. ``hi=None`` encodes an unbounded upper end."""

    lo: int
    hi: int | None = None

    def __post_init__(self):
        for v in (self.lo, self.hi):
            if v is None:
                continue
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ValueError(f"interval bounds must be natural numbers, got {v!r}")
        if self.hi is not None and self.lo > self.hi:
            raise ValueError(
                f"interval lower bound exceeds upper: [{self.lo},{self.hi}]"
            )

    @property
    def bounded(self) -> bool:
        return self.hi is not None

    @property
    def hi_key(self) -> float:
        return math.inf if self.hi is None else self.hi

    def with_hi(self, hi: int | None) -> Interval:
        return Interval(self.lo, hi)

    def __str__(self):
        return f"[{self.lo},{'inf' if self.hi is None else self.hi}]"


UNBOUNDED = Interval(0, None)


class TemporalKind(enum.Enum):
    UNTIL = "U"
    RELEASE = "R"


@dataclass(frozen=True)
class Formula:
    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    interval: Interval
    right: Formula

    kind = TemporalKind.UNTIL


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    interval: Interval
    right: Formula

    kind = TemporalKind.RELEASE


Temporal = (Until, Release)

TRUE = Top()
FALSE = Not(TRUE)


def eventually(interval: Interval, phi: Formula) -> Until:
    return Until(TRUE, interval, phi)


def globally(interval: Interval, phi: Formula) -> Release:
    return Release(FALSE, interval, phi)


def implies(a: Formula, b: Formula) -> Or:
    return Or(Not(a), b)


def next_(phi: Formula) -> Until:
    return Until(TRUE, Interval(1, 1), phi)


def with_interval(node: Until | Release, interval: Interval) -> Until | Release:
    return type(node)(node.left, interval, node.right)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, Not):
        return (phi.operand,)
    if isinstance(phi, (And, Or, Until, Release)):
        return (phi.left, phi.right)
    return ()


def atoms(phi: Formula) -> set[str]:
    if isinstance(phi, Atom):
        return {phi.name}
    out: set[str] = set()
    for c in children(phi):
        out |= atoms(c)
    return out


# --- semantics -------------------------------------------------------------


def eval_formula(trace: LassoTrace, t: int, phi: Formula) -> bool:
    """Pointwise satisfaction ``trace, t |= phi``."""
    return _labels(trace, phi)[trace.normalize(t)]


def holds(trace: LassoTrace, phi: Formula) -> bool:
    return eval_formula(trace, 0, phi)


def _scan_range(trace: LassoTrace, p: int, interval: Interval) -> range:
    # offsets i in the interval such that p+i lies in the covering range of p+lo
    end = trace.end_index(p + interval.lo) - p
    hi = end if interval.hi is None else min(interval.hi, end)
    return range(interval.lo, hi + 1)


@lru_cache(maxsize=1 << 16)
def _labels(trace: LassoTrace, phi: Formula) -> tuple[bool, ...]:
    # Truth value at every normalised position; positions past the prefix are
    # periodic in the suffix length, so |trace| entries determine all of them.
    n = len(trace)
    norm = trace.normalize
    if isinstance(phi, Atom):
        return tuple(phi.name in trace.state_at(p) for p in range(n))
    if isinstance(phi, Top):
        return (True,) * n
    if isinstance(phi, Not):
        return tuple(not v for v in _labels(trace, phi.operand))
    if isinstance(phi, And):
        a, b = _labels(trace, phi.left), _labels(trace, phi.right)
        return tuple(x and y for x, y in zip(a, b))
    if isinstance(phi, Or):
        a, b = _labels(trace, phi.left), _labels(trace, phi.right)
        return tuple(x or y for x, y in zip(a, b))
    if isinstance(phi, (Until, Release)):
        left, right = _labels(trace, phi.left), _labels(trace, phi.right)
        out = []
        for p in range(n):
            rng = _scan_range(trace, p, phi.interval)
            if isinstance(phi, Until):
                # exists i: right at p+i, left on [lo, i)
                val = False
                for i in rng:
                    if right[norm(p + i)]:
                        val = True
                        break
                    if not left[norm(p + i)]:
                        break
            else:
                # right on all of I, or left at some j with right on [lo, j]
                val = True
                for i in rng:
                    if not right[norm(p + i)]:
                        val = False
                        break
                    if left[norm(p + i)]:
                        break
            out.append(val)
        return tuple(out)
    raise TypeError(f"not a formula: {phi!r}")


def is_weaker_bruteforce(
    phi: Formula, phi2: Formula, traces: Iterable[LassoTrace], horizon: int
) -> bool:
    """Sampled check of ``phi ⊑ phi2``: every sampled (trace, t) satisfying
    ``phi`` also satisfies ``phi2``. Only a necessary condition."""
    for trace in traces:
        for t in range(horizon + 1):
            if eval_formula(trace, t, phi) and not eval_formula(trace, t, phi2):
                return False
    return True


# --- syntactic transforms --------------------------------------------------


def negate(phi: Formula) -> Formula:
    """``¬phi`` without stacking double negations."""
    if isinstance(phi, Not):
        return phi.operand
    return Not(phi)


def nnf(phi: Formula) -> Formula:
    """Negation normal form: negations only directly above atoms or ``true``."""
    if isinstance(phi, (Atom, Top)):
        return phi
    if isinstance(phi, And):
        return And(nnf(phi.left), nnf(phi.right))
    if isinstance(phi, Or):
        return Or(nnf(phi.left), nnf(phi.right))
    if isinstance(phi, (Until, Release)):
        return type(phi)(nnf(phi.left), phi.interval, nnf(phi.right))
    inner = phi.operand
    if isinstance(inner, (Atom, Top)):
        return phi
    if isinstance(inner, Not):
        return nnf(inner.operand)
    if isinstance(inner, And):
        return Or(nnf(Not(inner.left)), nnf(Not(inner.right)))
    if isinstance(inner, Or):
        return And(nnf(Not(inner.left)), nnf(Not(inner.right)))
    if isinstance(inner, Until):
        return Release(nnf(Not(inner.left)), inner.interval, nnf(Not(inner.right)))
    if isinstance(inner, Release):
        return Until(nnf(Not(inner.left)), inner.interval, nnf(Not(inner.right)))
    raise TypeError(f"not a formula: {phi!r}")


def temporal_depth(phi: Formula) -> int:
    own = 1 if isinstance(phi, (Until, Release)) else 0
    return own + max((temporal_depth(c) for c in children(phi)), default=0)


def _is_true(phi: Formula) -> bool:
    return isinstance(phi, Top)


def _is_false(phi: Formula) -> bool:
    return phi == FALSE


def _shift(phi: Formula, k: int) -> Formula:
    for _ in range(k):
        phi = next_(phi)
    return phi


def to_ltl(phi: Formula) -> Formula:
    """Expand bounded intervals into nested next operators.

    The result only contains ``[0,inf]`` Until/Release, ``[1,1]`` eventually
    (next) and propositional connectives.
    """
    if isinstance(phi, (Atom, Top)):
        return phi
    if isinstance(phi, Not):
        return Not(to_ltl(phi.operand))
    if isinstance(phi, And):
        return And(to_ltl(phi.left), to_ltl(phi.right))
    if isinstance(phi, Or):
        return Or(to_ltl(phi.left), to_ltl(phi.right))
    left, right = to_ltl(phi.left), to_ltl(phi.right)
    lo, hi = phi.interval.lo, phi.interval.hi
    if phi.interval == Interval(1, 1) and isinstance(phi, Until) and _is_true(left):
        return next_(right)
    if hi is None:
        return _shift(type(phi)(left, UNBOUNDED, right), lo)
    body = right
    for _ in range(hi - lo):
        if isinstance(phi, Until):
            step = Or(right, next_(body) if _is_true(left) else And(left, next_(body)))
        else:
            step = And(right, next_(body) if _is_false(left) else Or(left, next_(body)))
        body = step
    return _shift(body, lo)


# --- printing --------------------------------------------------------------

_PREC_IMPLIES, _PREC_OR, _PREC_AND, _PREC_TEMPORAL, _PREC_UNARY, _PREC_ATOM = range(6)


def _interval_text(interval: Interval) -> str:
    return "" if interval == UNBOUNDED else str(interval)


def _prec(phi: Formula) -> int:
    if isinstance(phi, (Atom, Top)) or phi == FALSE:
        return _PREC_ATOM
    if isinstance(phi, Or) and isinstance(phi.left, Not) and phi.left != FALSE:
        return _PREC_IMPLIES
    if isinstance(phi, Or):
        return _PREC_OR
    if isinstance(phi, And):
        return _PREC_AND
    if isinstance(phi, Until) and _is_true(phi.left):
        return _PREC_UNARY
    if isinstance(phi, Release) and _is_false(phi.left):
        return _PREC_UNARY
    if isinstance(phi, (Until, Release)):
        return _PREC_TEMPORAL
    return _PREC_UNARY


def to_string(phi: Formula, mark: Formula | None = None) -> str:
    """Concrete syntax accepted by :func:`cegiw.parser.parse_formula`.

    ``⊤ U_I`` and ``false R_I`` are printed back as ``F``/``G`` and ``¬a ∨ b``
    as ``a -> b``. If ``mark`` is given (by identity) it is printed with ``?``.
    """

    def wrap(sub: Formula, min_prec: int) -> str:
        s = go(sub)
        return f"({s})" if _prec(sub) < min_prec else s

    def unary(op: str, node: Formula, operand: Formula) -> str:
        q = "?" if node is mark else ""
        return f"{op}{q} {wrap(operand, _PREC_UNARY)}"

    def go(phi: Formula) -> str:
        if isinstance(phi, Atom):
            return phi.name
        if isinstance(phi, Top):
            return "true"
        if phi == FALSE:
            return "false"
        if isinstance(phi, Not):
            return "!" + wrap(phi.operand, _PREC_UNARY)
        if _prec(phi) == _PREC_IMPLIES:
            # keep binary antecedents/consequents visually grouped
            lhs, rhs = phi.left.operand, phi.right
            ls = f"({go(lhs)})" if _prec(lhs) <= _PREC_TEMPORAL else go(lhs)
            rs = f"({go(rhs)})" if _prec(rhs) < _PREC_IMPLIES else go(rhs)
            return f"{ls} -> {rs}"
        if isinstance(phi, Or):
            return f"{wrap(phi.left, _PREC_OR)} | {wrap(phi.right, _PREC_AND)}"
        if isinstance(phi, And):
            return f"{wrap(phi.left, _PREC_AND)} & {wrap(phi.right, _PREC_TEMPORAL)}"
        if isinstance(phi, Until) and _is_true(phi.left):
            if phi.interval == Interval(1, 1):
                return unary("X", phi, phi.right)
            return unary("F" + _interval_text(phi.interval), phi, phi.right)
        if isinstance(phi, Release) and _is_false(phi.left):
            return unary("G" + _interval_text(phi.interval), phi, phi.right)
        op = "U" if isinstance(phi, Until) else "R"
        q = "?" if phi is mark else ""
        return (
            f"{wrap(phi.left, _PREC_UNARY)} {op}{_interval_text(phi.interval)}{q} "
            f"{wrap(phi.right, _PREC_UNARY)}"
        )

    return go(phi)
