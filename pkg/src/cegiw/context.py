"""Formulas with a single hole, and extraction of a marked temporal subformula."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from cegiw.mtl import (
    And,
    Formula,
    Interval,
    Not,
    Or,
    Release,
    Until,
    children,
    negate,
)


class ContextError(ValueError):
    pass


@dataclass(frozen=True)
class Context:
    pass


@dataclass(frozen=True)
class Hole(Context):
    pass


HOLE = Hole()


@dataclass(frozen=True)
class AndL(Context):
    ctx: Context
    phi: Formula


@dataclass(frozen=True)
class AndR(Context):
    phi: Formula
    ctx: Context


@dataclass(frozen=True)
class OrL(Context):
    ctx: Context
    phi: Formula


@dataclass(frozen=True)
class OrR(Context):
    phi: Formula
    ctx: Context


@dataclass(frozen=True)
class UntilL(Context):
    ctx: Context
    interval: Interval
    phi: Formula


@dataclass(frozen=True)
class UntilR(Context):
    phi: Formula
    interval: Interval
    ctx: Context


@dataclass(frozen=True)
class ReleaseL(Context):
    ctx: Context
    interval: Interval
    phi: Formula


@dataclass(frozen=True)
class ReleaseR(Context):
    phi: Formula
    interval: Interval
    ctx: Context


def substitute(c: Context, psi: Formula) -> Formula:
    """Fill the hole of ``c`` with ``psi``."""
    if isinstance(c, Hole):
        return psi
    if isinstance(c, AndL):
        return And(substitute(c.ctx, psi), c.phi)
    if isinstance(c, AndR):
        return And(c.phi, substitute(c.ctx, psi))
    if isinstance(c, OrL):
        return Or(substitute(c.ctx, psi), c.phi)
    if isinstance(c, OrR):
        return Or(c.phi, substitute(c.ctx, psi))
    if isinstance(c, UntilL):
        return Until(substitute(c.ctx, psi), c.interval, c.phi)
    if isinstance(c, UntilR):
        return Until(c.phi, c.interval, substitute(c.ctx, psi))
    if isinstance(c, ReleaseL):
        return Release(substitute(c.ctx, psi), c.interval, c.phi)
    if isinstance(c, ReleaseR):
        return Release(c.phi, c.interval, substitute(c.ctx, psi))
    raise TypeError(f"not a context: {c!r}")


def hole_depth(c: Context) -> int:
    """Number of context nodes above the hole."""
    n = 0
    while not isinstance(c, Hole):
        c = c.ctx
        n += 1
    return n


def extract(phi: Formula, path: Sequence[int]) -> tuple[Context, Until | Release]:
    """Split ``phi`` at the temporal node addressed by ``path``.

    ``path`` is a sequence of child indices (0 = left/only child, 1 = right).
    Negations met on the way are pushed inwards, so the returned target may be
    the dual operator of the one in ``phi``.
    """
    return _extract(phi, tuple(path), True, 0)


def _extract(node: Formula, path: tuple[int, ...], positive: bool, depth: int):
    if not path:
        if not isinstance(node, (Until, Release)):
            raise ContextError(
                f"path addresses a {type(node).__name__}, not an Until/Release"
            )
        if positive:
            return HOLE, node
        dual = Release if isinstance(node, Until) else Until
        return HOLE, dual(negate(node.left), node.interval, negate(node.right))

    step, rest = path[0], path[1:]
    kids = children(node)
    if step not in (0, 1) or step >= len(kids):
        raise ContextError(f"invalid path: no child {step} at depth {depth}")
    if isinstance(node, Not):
        return _extract(node.operand, rest, not positive, depth + 1)

    ctx, target = _extract(kids[step], rest, positive, depth + 1)
    other = kids[1 - step] if positive else negate(kids[1 - step])
    if isinstance(node, (And, Or)):
        # De Morgan: under a negation And becomes Or and vice versa
        conj = isinstance(node, And) == positive
        left, right = (AndL, AndR) if conj else (OrL, OrR)
        return (left(ctx, other) if step == 0 else right(other, ctx)), target
    until = isinstance(node, Until) == positive
    left, right = (UntilL, UntilR) if until else (ReleaseL, ReleaseR)
    j = node.interval
    return (left(ctx, j, other) if step == 0 else right(other, j, ctx)), target


def node_at(phi: Formula, path: Sequence[int]) -> Formula:
    for step in path:
        phi = children(phi)[step]
    return phi


def find_path(phi: Formula, node: Formula) -> tuple[int, ...] | None:
    """Path to ``node`` inside ``phi``, matched by identity."""
    if phi is node:
        return ()
    for i, c in enumerate(children(phi)):
        sub = find_path(c, node)
        if sub is not None:
            return (i,) + sub
    return None


def temporal_paths(phi: Formula) -> list[tuple[int, ...]]:
    """Addresses of every Until/Release node in ``phi``."""
    out = [()] if isinstance(phi, (Until, Release)) else []
    for i, c in enumerate(children(phi)):
        out.extend((i,) + p for p in temporal_paths(c))
    return out
