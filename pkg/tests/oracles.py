"""Independent reference implementations and random instance generators.

Nothing here calls into cegiw.weaken or cegiw.driver; the oracles only use
formula construction, substitution and evaluation.
"""

from __future__ import annotations

import random

from cegiw.context import (
    HOLE,
    AndL,
    AndR,
    Context,
    OrL,
    OrR,
    ReleaseL,
    ReleaseR,
    UntilL,
    UntilR,
    substitute,
)
from cegiw.lasso import LassoTrace, canonicalize
from cegiw.mtl import (
    FALSE,
    TRUE,
    And,
    Atom,
    Formula,
    Interval,
    Not,
    Or,
    Release,
    Top,
    Until,
    eval_formula,
    temporal_depth,
    with_interval,
)

ATOMS = ("p", "q", "r")


# --- semantics by direct unfolding ------------------------------------------


def naive_eval(pi: LassoTrace, t: int, phi: Formula) -> bool:
    """Satisfaction by literal application of the semantic clauses.

    Unbounded quantifiers are cut at ``lo + 2|pi|`` offsets past ``t``, which
    covers a full period of the suffix from any starting point.
    """
    if isinstance(phi, Atom):
        return phi.name in pi.state_at(t)
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Not):
        return not naive_eval(pi, t, phi.operand)
    if isinstance(phi, And):
        return naive_eval(pi, t, phi.left) and naive_eval(pi, t, phi.right)
    if isinstance(phi, Or):
        return naive_eval(pi, t, phi.left) or naive_eval(pi, t, phi.right)
    lo = phi.interval.lo
    hi = phi.interval.hi if phi.interval.hi is not None else lo + 2 * len(pi) + t
    offsets = range(lo, hi + 1)
    if isinstance(phi, Until):
        return any(
            naive_eval(pi, t + i, phi.right)
            and all(naive_eval(pi, t + j, phi.left) for j in range(lo, i))
            for i in offsets
        )
    assert isinstance(phi, Release)
    return all(naive_eval(pi, t + i, phi.right) for i in offsets) or any(
        naive_eval(pi, t + j, phi.left)
        and all(naive_eval(pi, t + i, phi.right) for i in range(lo, j + 1))
        for j in offsets
    )


# --- weakening oracles --------------------------------------------------------


def modifications_strongest_first(target, cap: int) -> list[Interval]:
    """Right-bound modifications of ``target.interval``, strongest first.

    Extensions run b, b+1, ..., cap; contractions run b, b-1, ..., lo (an
    unbounded interval is followed by every finite bound from cap down).
    """
    i = target.interval
    if isinstance(target, Until):
        if i.hi is None:
            return [i]
        return [Interval(i.lo, h) for h in range(i.hi, max(i.hi, cap) + 1)]
    top = [i] if i.hi is None else []
    start = cap if i.hi is None else i.hi
    return top + [Interval(i.lo, h) for h in range(start, i.lo - 1, -1)]


def trace_cap(target, pi: LassoTrace) -> int:
    lo = target.interval.lo
    base = target.interval.hi if target.interval.hi is not None else lo
    return base + lo + 2 * len(pi) + 2


def oracle_weaken(c: Context, target, pi: LassoTrace, t: int = 0) -> Interval | None:
    for cand in modifications_strongest_first(target, trace_cap(target, pi)):
        if eval_formula(pi, t, substitute(c, with_interval(target, cand))):
            return cand
    return None


# --- random instances ---------------------------------------------------------


def random_state(rng: random.Random, atoms=ATOMS) -> frozenset[str]:
    return frozenset(a for a in atoms if rng.random() < 0.5)


def random_trace(rng: random.Random, max_len: int = 10, atoms=ATOMS) -> LassoTrace:
    n = rng.randint(1, max_len)
    k = rng.randint(0, n - 1)
    states = [random_state(rng, atoms) for _ in range(n)]
    return canonicalize(states[:k], states[k:])


def random_interval(rng: random.Random, max_hi: int = 6, p_inf: float = 0.15) -> Interval:
    lo = rng.randint(0, max_hi // 2)
    if rng.random() < p_inf:
        return Interval(lo, None)
    return Interval(lo, rng.randint(lo, max_hi))


def random_formula(rng: random.Random, depth: int, atoms=ATOMS, max_hi: int = 6) -> Formula:
    """Random formula with temporal depth at most ``depth``."""
    roll = rng.random()
    if depth <= 0 or roll < 0.3:
        leaf = rng.random()
        if leaf < 0.08:
            return TRUE
        if leaf < 0.12:
            return FALSE
        a = Atom(rng.choice(atoms))
        return Not(a) if rng.random() < 0.3 else a
    if roll < 0.4:
        return Not(random_formula(rng, depth, atoms, max_hi))
    if roll < 0.6:
        op = rng.choice([And, Or])
        return op(random_formula(rng, depth - 1, atoms, max_hi), random_formula(rng, depth - 1, atoms, max_hi))
    op = rng.choice([Until, Release])
    return op(
        random_formula(rng, depth - 1, atoms, max_hi),
        random_interval(rng, max_hi),
        random_formula(rng, depth - 1, atoms, max_hi),
    )


def random_target(rng: random.Random, atoms=ATOMS, max_hi: int = 6):
    op = rng.choice([Until, Release])
    side = lambda: random_formula(rng, 0, atoms)  # noqa: E731
    left = side()
    if rng.random() < 0.3:
        left = TRUE if op is Until else FALSE
    return op(left, random_interval(rng, max_hi), side())


def random_context(rng: random.Random, temporal_budget: int, atoms=ATOMS, max_len: int = 4) -> Context:
    """Random context with at most ``temporal_budget`` temporal nodes on the
    hole path; adjacent formulas are propositional or one temporal level."""
    ctx: Context = HOLE
    budget = temporal_budget
    for _ in range(rng.randint(0, max_len)):
        adj_depth = 1 if budget > 0 and rng.random() < 0.3 else 0
        adj = random_formula(rng, adj_depth, atoms)
        if budget > 0 and rng.random() < 0.6:
            j = random_interval(rng)
            if rng.random() < 0.5:
                ctx = rng.choice([UntilL, ReleaseL])(ctx, j, adj)
            else:
                ctx = rng.choice([UntilR, ReleaseR])(adj, j, ctx)
            budget -= 1
        else:
            left_hole = rng.random() < 0.5
            if rng.random() < 0.5:
                ctx = AndL(ctx, adj) if left_hole else AndR(adj, ctx)
            else:
                ctx = OrL(ctx, adj) if left_hole else OrR(adj, ctx)
    return ctx


def random_instance(rng: random.Random, max_td: int = 3, max_len: int = 10):
    """(context, target, trace) with temporal depth of the whole formula <= max_td."""
    while True:
        c = random_context(rng, max_td - 1)
        target = random_target(rng)
        if temporal_depth(substitute(c, target)) <= max_td:
            return c, target, random_trace(rng, max_len)


# --- model level --------------------------------------------------------------


def random_model_text(rng: random.Random, atoms=ATOMS) -> str:
    """Small random model with at most 32 states and no deadlocks.

    Every variable ends its rule list with a ``default`` rule, and right-hand
    sides are constants or sets of constants from the variable's domain.
    """
    variables = []
    size = 1
    for k in range(rng.randint(1, 3)):
        if rng.random() < 0.5:
            dom = ["FALSE", "TRUE"]
            decl = "boolean"
        else:
            dom = [f"v{k}_{i}" for i in range(rng.randint(2, 4))]
            decl = "{" + ", ".join(dom) + "}"
        if size * len(dom) > 32:
            break
        size *= len(dom)
        variables.append((f"x{k}", dom, decl))

    def pred() -> str:
        name, dom, _ = rng.choice(variables)
        lit = f"{name} = {rng.choice(dom)}"
        if rng.random() < 0.3:
            other, odom, _ = rng.choice(variables)
            lit = f"{lit} {rng.choice('&|')} {other} != {rng.choice(odom)}"
        return lit

    def rhs(dom) -> str:
        vals = rng.sample(dom, 2 if rng.random() < 0.3 else 1)
        return f"= {vals[0]}" if len(vals) == 1 else "in {" + ", ".join(vals) + "}"

    lines = ["MODULE main", "VAR"]
    lines += [f"  {n} : {d};" for n, _, d in variables]
    lines.append("DEFINE")
    lines += [f"  {a} := {pred()};" for a in atoms]
    lines += ["INIT", f"  {pred()}" if rng.random() < 0.7 else "  TRUE", "TRANS"]
    for name, dom, _ in variables:
        if rng.random() < 0.05:
            continue  # unconstrained
        for _ in range(rng.randint(0, 2)):
            lines.append(f"  {pred()} : next({name}) {rhs(dom)};")
        lines.append(f"  default : next({name}) {rhs(dom)};")
    return "\n".join(lines) + "\n"


def random_cycle_model_text(rng: random.Random, atoms=ATOMS) -> str:
    """A location graph around a ring with random detours. Every location
    recurs on the ring, so timed response properties are often repairable."""
    k = rng.randint(2, 8)
    locs = [f"l{i}" for i in range(k)]
    lines = ["VAR", "  loc : {" + ", ".join(locs) + "};"]
    if k <= 4 and rng.random() < 0.5:
        lines.append("  flag : boolean;")
    lines.append("DEFINE")
    for a in atoms:
        chosen = rng.sample(locs, rng.randint(1, max(1, k // 2)))
        lines.append(f"  {a} := " + " | ".join(f"loc = {l}" for l in chosen) + ";")
    lines += ["INIT", "  loc = l0", "TRANS"]
    for i, l in enumerate(locs):
        succ = {locs[(i + 1) % k]}
        succ |= {x for x in locs if rng.random() < 0.2}
        vals = sorted(succ)
        rhs = f"= {vals[0]}" if len(vals) == 1 else "in {" + ", ".join(vals) + "}"
        lines.append(f"  loc = {l} : next(loc) {rhs};")
    return "\n".join(lines) + "\n"


def oracle_cegiw(m, c: Context, target, bound: int):
    """Strongest modification of ``target`` under which ``c[target]`` holds on
    every lasso of ``m`` up to ``bound``; None if there is none."""
    from cegiw.modelcheck import enumerate_lassos

    lassos = list(enumerate_lassos(m, bound))
    lo = target.interval.lo
    base = target.interval.hi if target.interval.hi is not None else lo
    cap = base + lo + 2 * bound + 2
    for cand in modifications_strongest_first(target, cap):
        phi = substitute(c, with_interval(target, cand))
        if all(eval_formula(pi, 0, phi) for pi in lassos):
            return cand
    return None


def oracle_lassos(m, bound: int) -> set[LassoTrace]:
    """Every concrete path of at most ``bound`` states with every loop-back
    edge, projected and canonicalised. Exponential; small models only."""
    out: set[LassoTrace] = set()

    def walk(path):
        succ = m.successors(path[-1])
        for l, s in enumerate(path):
            if s in succ:
                atoms = [m.project(x) for x in path]
                out.add(canonicalize(atoms[:l], atoms[l:]))
        if len(path) < bound:
            for s in succ:
                walk(path + [s])

    for s in m.initial_states():
        walk([s])
    return out


def response_context(rng: random.Random, atoms=ATOMS) -> Context:
    """``G (a -> [-])``, the shape of typical timed response requirements."""
    trigger = random_formula(rng, 0, atoms)
    return ReleaseR(FALSE, Interval(0), OrR(Not(trigger), HOLE))


def random_cegiw_instance(rng: random.Random, max_bound: int = 8, max_lassos: int = 3000):
    """(model, context, target, bound) with at most ``max_lassos`` lassos.

    The bound is the largest value up to ``max_bound`` that keeps the lasso
    count within budget, so every instance stays cheap to brute-force.
    """
    from cegiw.modelcheck import ModelError, enumerate_lassos, parse_model

    while True:
        try:
            gen = random_cycle_model_text if rng.random() < 0.5 else random_model_text
            m = parse_model(gen(rng))
        except ModelError:
            continue
        top = rng.randint(2, max_bound)
        bound = 0
        for b in range(1, top + 1):
            if len(list(enumerate_lassos(m, b))) > max_lassos:
                break
            bound = b
        if bound == 0:
            continue
        if rng.random() < 0.5:
            c = response_context(rng)
            body = random_formula(rng, 0, ATOMS)
            lo = rng.randint(0, 2)
            i = Interval(lo, rng.randint(lo, 4))
            target = Until(TRUE, i, body) if rng.random() < 0.5 else Release(FALSE, i, body)
        else:
            c = random_context(rng, 1)
            target = random_target(rng, max_hi=4)
        return m, c, target, bound
