import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cegiw.context import (
    HOLE,
    AndL,
    AndR,
    Context,
    ContextError,
    Hole,
    OrL,
    OrR,
    ReleaseL,
    ReleaseR,
    UntilL,
    UntilR,
    extract,
    hole_depth,
    substitute,
    temporal_paths,
)
from cegiw.mtl import FALSE, TRUE, Atom, Interval, Not, Release, Until, eval_formula, eventually, globally, implies
from oracles import random_context, random_formula, random_interval, random_trace

p, q, r = Atom("p"), Atom("q"), Atom("r")
seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestSubstitute:
    def test_hole(self):
        assert substitute(HOLE, q) == q

    def test_conjunction(self):
        assert substitute(AndL(HOLE, p), q) == q & p

    def test_until_right(self):
        assert substitute(UntilR(p, Interval(0, 3), HOLE), q) == Until(p, Interval(0, 3), q)

    def test_every_node_type(self):
        c = AndR(p, OrL(ReleaseR(p, Interval(1), UntilL(ReleaseL(OrR(q, HOLE), Interval(0, 1), r), Interval(0, 2), q)), r))
        assert hole_depth(c) == 6
        assert substitute(c, TRUE) == p & (Release(p, Interval(1), Until(Release(q | TRUE, Interval(0, 1), r), Interval(0, 2), q)) | r)


class TestExtract:
    def test_desugared_globally(self):
        phi = globally(Interval(0), implies(r, eventually(Interval(1, 3), r)))
        c, target = extract(phi, (1, 1))
        assert c == ReleaseR(FALSE, Interval(0), OrR(Not(r), HOLE))
        assert target == eventually(Interval(1, 3), r)

    def test_negated_until_becomes_release(self):
        c, target = extract(Not(Until(p, Interval(0, 3), q)), (0,))
        assert c == HOLE
        assert target == Release(Not(p), Interval(0, 3), Not(q))

    def test_identity(self):
        phi = Until(p, Interval(0, 3), q)
        assert extract(phi, ()) == (HOLE, phi)

    def test_negation_flips_outer_operators(self):
        phi = Not(p & Until(q, Interval(0, 2), Release(p, Interval(1, 4), r)))
        c, target = extract(phi, (0, 1, 1))
        assert isinstance(c, OrR) and c.phi == Not(p)
        assert isinstance(c.ctx, ReleaseR) and c.ctx.phi == Not(q)
        assert target == Until(Not(p), Interval(1, 4), Not(r))

    def test_non_temporal_target(self):
        with pytest.raises(ContextError, match="not an Until/Release"):
            extract(p & q, (0,))

    def test_invalid_path(self):
        with pytest.raises(ContextError, match="invalid path"):
            extract(Until(p, Interval(0), q), (2,))
        with pytest.raises(ContextError, match="invalid path"):
            extract(p, (0,))

    @given(seeds)
    def test_substitution_restores_meaning(self, seed):
        rng = random.Random(seed)
        phi = random_formula(rng, 3)
        paths = temporal_paths(phi)
        if not paths:
            return
        c, target = extract(phi, rng.choice(paths))
        assert _negation_free(c)
        psi = substitute(c, target)
        pi = random_trace(rng)
        for t in range(4):
            assert eval_formula(pi, t, psi) == eval_formula(pi, t, phi)


_PATH_NODES = (AndL, AndR, OrL, OrR, UntilL, UntilR, ReleaseL, ReleaseR)


def _negation_free(c: Context) -> bool:
    while isinstance(c, _PATH_NODES):
        c = c.ctx
    return isinstance(c, Hole)


class TestContextMonotonicity:
    @given(seeds, st.integers(0, 5))
    def test_weaker_hole_gives_weaker_formula(self, seed, delta):
        rng = random.Random(seed)
        c = random_context(rng, 2)
        a, b = random_formula(rng, 1), random_formula(rng, 1)
        i = random_interval(rng, p_inf=0)
        if rng.random() < 0.5:
            strong, weak = Until(a, i, b), Until(a, i.with_hi(i.hi + delta), b)
        else:
            strong, weak = Release(a, i, b), Release(a, i.with_hi(max(i.lo, i.hi - delta)), b)
        pi = random_trace(rng)
        t = rng.randint(0, 5)
        if eval_formula(pi, t, substitute(c, strong)):
            assert eval_formula(pi, t, substitute(c, weak))
