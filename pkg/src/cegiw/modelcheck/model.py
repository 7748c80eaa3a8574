"""Finite-state models in a small nuXmv-compatible language.

::

    MODULE main                      -- optional
    VAR
      state : {resting, walking};
      flag : boolean;
      battery : 0..15;
    DEFINE
      resting := state = resting;    -- atoms visible to formulas
    INIT
      state = resting & battery = 15
    TRANS
      state = resting : next(state) = walking;
      battery > 0 : next(battery) = battery - 1;
      default : next(state) in {resting, walking};

Rules are grouped per assigned variable; for each variable the first rule
whose guard holds in the current state gives its next value(s). ``default``
(or ``TRUE``) is an unconditional guard. Rules may be wrapped in
``case ... esac``. A variable with no rules is unconstrained. Identifiers
resolve to variables first, then enumeration symbols, then DEFINE names.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Union

Value = Union[bool, int, str]


class ModelError(ValueError):
    pass


# --- expressions ----------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Value


@dataclass(frozen=True)
class Name:
    """Unresolved identifier; replaced by Var, Const or Ref after parsing."""

    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class SetExpr:
    items: tuple["Expr", ...]


Expr = Union[Const, Name, Var, Ref, Unary, Binary, SetExpr]


@dataclass(frozen=True)
class Rule:
    guard: Expr
    var: str
    rhs: Expr


_BINOPS = {
    "&": lambda a, b: a and b,
    "|": lambda a, b: a or b,
    "->": lambda a, b: (not a) or b,
    "<->": lambda a, b: a == b,
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
}


def _same_kind(a: Value, b: Value) -> bool:
    return isinstance(a, bool) == isinstance(b, bool) and isinstance(a, str) == isinstance(b, str)


def eval_expr(e: Expr, env: dict[str, Value], defines: dict[str, Expr]) -> Value | frozenset:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Ref):
        return eval_expr(defines[e.name], env, defines)
    if isinstance(e, Unary):
        v = eval_expr(e.arg, env, defines)
        return (not v) if e.op == "!" else -v
    if isinstance(e, Binary):
        a = eval_expr(e.left, env, defines)
        b = eval_expr(e.right, env, defines)
        if e.op in ("=", "!=") and not _same_kind(a, b):
            return e.op == "!="
        return _BINOPS[e.op](a, b)
    if isinstance(e, SetExpr):
        return frozenset(eval_expr(i, env, defines) for i in e.items)
    raise ModelError(f"unresolved expression {e!r}")


def format_value(v: Value) -> str:
    if v is True:
        return "TRUE"
    if v is False:
        return "FALSE"
    return str(v)


_PREC = {"->": 1, "<->": 1, "|": 2, "&": 3, "=": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4, "+": 5, "-": 5}


def format_expr(e: Expr, parent: int = 0) -> str:
    if isinstance(e, Const):
        return format_value(e.value)
    if isinstance(e, (Name, Var, Ref)):
        return e.name
    if isinstance(e, Unary):
        return f"{e.op}{format_expr(e.arg, 9)}"
    if isinstance(e, SetExpr):
        return "{" + ", ".join(format_expr(i) for i in e.items) + "}"
    p = _PREC[e.op]
    s = f"{format_expr(e.left, p)} {e.op} {format_expr(e.right, p + 1)}"
    return f"({s})" if p < parent else s


# --- model ------------------------------------------------------------------


@dataclass(frozen=True)
class Model:
    variables: dict[str, tuple[Value, ...]]
    init: Expr
    rules: tuple[Rule, ...]
    atom_defs: dict[str, Expr]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.variables:
            raise ModelError("model declares no variables")
        for name, dom in self.variables.items():
            if not dom:
                raise ModelError(f"variable {name!r} has an empty domain")
        for r in self.rules:
            if r.var not in self.variables:
                raise ModelError(f"rule assigns undeclared variable {r.var!r}")
        states = self.reachable_states()
        if not self.initial_states():
            raise ModelError("no initial state satisfies INIT")
        for s in states:
            if not self.successors(s):
                raise ModelError(
                    f"deadlock: state {self.describe(s)} has no successor"
                )

    def env(self, state: tuple) -> dict[str, Value]:
        return dict(zip(self.variables, state))

    def describe(self, state: tuple) -> str:
        return ", ".join(f"{k} = {format_value(v)}" for k, v in zip(self.variables, state))

    def _all_states(self):
        return itertools.product(*self.variables.values())

    def initial_states(self) -> list[tuple]:
        if "init" not in self._cache:
            self._cache["init"] = [
                s for s in self._all_states() if eval_expr(self.init, self.env(s), self.atom_defs)
            ]
        return self._cache["init"]

    def successors(self, state: tuple) -> list[tuple]:
        succ = self._cache.setdefault("succ", {})
        if state in succ:
            return succ[state]
        env = self.env(state)
        choices = []
        for name, dom in self.variables.items():
            rules = [r for r in self.rules if r.var == name]
            if not rules:
                choices.append(dom)
                continue
            rule = next((r for r in rules if eval_expr(r.guard, env, self.atom_defs)), None)
            if rule is None:
                choices.append(())
                continue
            val = eval_expr(rule.rhs, env, self.atom_defs)
            vals = sorted(val, key=str) if isinstance(val, frozenset) else [val]
            for v in vals:
                if v not in dom or not _same_kind(v, dom[0]):
                    raise ModelError(
                        f"next({name}) = {format_value(v)} is outside its domain in state {self.describe(state)}"
                    )
            choices.append(tuple(dict.fromkeys(vals)))
        out = list(itertools.product(*choices))
        succ[state] = out
        return out

    def reachable_states(self) -> list[tuple]:
        if "reach" not in self._cache:
            seen = dict.fromkeys(self.initial_states())
            queue = deque(seen)
            while queue:
                s = queue.popleft()
                for n in self.successors(s):
                    if n not in seen:
                        seen[n] = None
                        queue.append(n)
            self._cache["reach"] = list(seen)
        return self._cache["reach"]

    def project(self, state: tuple) -> frozenset[str]:
        """Atoms (DEFINE names, boolean variables) true in ``state``."""
        proj = self._cache.setdefault("proj", {})
        if state not in proj:
            env = self.env(state)
            atoms = {a for a, e in self.atom_defs.items() if eval_expr(e, env, self.atom_defs) is True}
            atoms |= {n for n, v in env.items() if v is True}
            proj[state] = frozenset(atoms)
        return proj[state]


# --- parsing ----------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<op><->|->|:=|\.\.|!=|<=|>=|[!&|=<>+\-(){},;:])
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_$#]*)
    """,
    re.VERBOSE,
)

SECTIONS = {"MODULE", "VAR", "DEFINE", "INIT", "TRANS"}
# recognised so a clear error is raised instead of a confusing parse failure
UNSUPPORTED = {"ASSIGN", "INVAR", "FAIRNESS", "JUSTICE", "COMPASSION", "IVAR", "FROZENVAR", "LTLSPEC", "CTLSPEC", "INVARSPEC"}


class _Tokens:
    def __init__(self, text: str):
        self.toks: list[tuple[str, str, int]] = []
        pos, line = 0, 1
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                raise ModelError(f"line {line}: unexpected character {text[pos]!r}")
            kind = m.lastgroup
            if kind != "ws":
                self.toks.append((kind, m.group(), line))
            line += m.group().count("\n")
            pos = m.end()
        self.toks.append(("EOF", "", line))
        self.i = 0

    def peek(self, k: int = 0) -> str:
        return self.toks[min(self.i + k, len(self.toks) - 1)][1]

    def kind(self) -> str:
        return self.toks[self.i][0]

    def line(self) -> int:
        return self.toks[self.i][2]

    def next(self) -> str:
        t = self.toks[self.i][1]
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.peek() == text and self.kind() != "EOF":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise ModelError(f"line {self.line()}: expected {text!r}, found {self.peek() or 'end of input'!r}")

    def at_section(self) -> bool:
        return self.kind() == "EOF" or (self.kind() == "ident" and self.peek() in SECTIONS | UNSUPPORTED)


def _parse_expr(tk: _Tokens) -> Expr:
    return _parse_binary(tk, 1)


def _parse_binary(tk: _Tokens, prec: int) -> Expr:
    if prec > 5:
        return _parse_unary(tk)
    left = _parse_binary(tk, prec + 1)
    while tk.kind() == "op" and _PREC.get(tk.peek()) == prec:
        op = tk.next()
        if op == "->":
            # right-associative
            return Binary(op, left, _parse_binary(tk, prec))
        left = Binary(op, left, _parse_binary(tk, prec + 1))
    return left


def _parse_unary(tk: _Tokens) -> Expr:
    if tk.accept("!"):
        return Unary("!", _parse_unary(tk))
    if tk.accept("-"):
        arg = _parse_unary(tk)
        if isinstance(arg, Const) and isinstance(arg.value, int) and not isinstance(arg.value, bool):
            return Const(-arg.value)
        return Unary("-", arg)
    if tk.accept("("):
        e = _parse_expr(tk)
        tk.expect(")")
        return e
    if tk.accept("{"):
        items = [_parse_expr(tk)]
        while tk.accept(","):
            items.append(_parse_expr(tk))
        tk.expect("}")
        return SetExpr(tuple(items))
    kind, line = tk.kind(), tk.line()
    text = tk.next()
    if kind == "num":
        return Const(int(text))
    if kind == "ident":
        if text == "TRUE":
            return Const(True)
        if text == "FALSE":
            return Const(False)
        return Name(text)
    raise ModelError(f"line {line}: unexpected {text or 'end of input'!r} in expression")


def _parse_domain(tk: _Tokens, name: str) -> tuple[Value, ...]:
    if tk.accept("boolean"):
        return (False, True)
    if tk.accept("{"):
        vals: list[Value] = []
        while True:
            kind = tk.kind()
            t = tk.next()
            vals.append(int(t) if kind == "num" else t)
            if not tk.accept(","):
                break
        tk.expect("}")
        return tuple(dict.fromkeys(vals))
    neg = tk.accept("-")
    if tk.kind() == "num":
        lo = int(tk.next()) * (-1 if neg else 1)
        tk.expect("..")
        neg = tk.accept("-")
        hi = int(tk.next()) * (-1 if neg else 1)
        if lo > hi:
            raise ModelError(f"variable {name!r}: empty range {lo}..{hi}")
        return tuple(range(lo, hi + 1))
    raise ModelError(f"line {tk.line()}: bad type for variable {name!r}")


def _parse_rules(tk: _Tokens) -> list[tuple[Expr, str, Expr, int]]:
    rules = []
    wrapped = tk.accept("case")
    while not tk.at_section() and not (wrapped and tk.peek() == "esac"):
        line = tk.line()
        guard = Const(True) if tk.accept("default") else _parse_expr(tk)
        tk.expect(":")
        tk.expect("next")
        tk.expect("(")
        var = tk.next()
        tk.expect(")")
        if not (tk.accept("=") or tk.accept("in")):
            raise ModelError(f"line {tk.line()}: expected '=' or 'in' after next({var})")
        rhs = _parse_expr(tk)
        tk.expect(";")
        rules.append((guard, var, rhs, line))
    if wrapped:
        tk.expect("esac")
        tk.accept(";")
    return rules


def parse_model(text: str) -> Model:
    tk = _Tokens(text)
    variables: dict[str, tuple[Value, ...]] = {}
    defines: dict[str, Expr] = {}
    inits: list[Expr] = []
    raw_rules: list[tuple[Expr, str, Expr, int]] = []
    while tk.kind() != "EOF":
        line = tk.line()
        section = tk.next()
        if section == "MODULE":
            tk.next()
        elif section == "VAR":
            while not tk.at_section():
                name = tk.next()
                if name in variables:
                    raise ModelError(f"variable {name!r} declared twice")
                tk.expect(":")
                variables[name] = _parse_domain(tk, name)
                tk.expect(";")
        elif section == "DEFINE":
            while not tk.at_section():
                name = tk.next()
                tk.expect(":=")
                defines[name] = _parse_expr(tk)
                tk.expect(";")
        elif section == "INIT":
            inits.append(_parse_expr(tk))
            tk.accept(";")
        elif section == "TRANS":
            raw_rules.extend(_parse_rules(tk))
        elif section in UNSUPPORTED:
            raise ModelError(f"line {line}: unsupported section {section!r}")
        else:
            raise ModelError(f"line {line}: unknown section {section!r}")
    if not variables:
        raise ModelError("model declares no variables")

    symbols = {v for dom in variables.values() for v in dom if isinstance(v, str)}

    def resolve(e: Expr) -> Expr:
        if isinstance(e, Name):
            if e.name in variables:
                return Var(e.name)
            if e.name in symbols:
                return Const(e.name)
            if e.name in defines:
                return Ref(e.name)
            raise ModelError(f"undeclared identifier {e.name!r}")
        if isinstance(e, Unary):
            return Unary(e.op, resolve(e.arg))
        if isinstance(e, Binary):
            return Binary(e.op, resolve(e.left), resolve(e.right))
        if isinstance(e, SetExpr):
            return SetExpr(tuple(resolve(i) for i in e.items))
        return e

    init: Expr = Const(True)
    for e in inits:
        init = resolve(e) if init == Const(True) else Binary("&", init, resolve(e))
    rules = []
    for guard, var, rhs, line in raw_rules:
        if var not in variables:
            raise ModelError(f"line {line}: rule assigns undeclared variable {var!r}")
        rules.append(Rule(resolve(guard), var, resolve(rhs)))
    return Model(
        variables=variables,
        init=init,
        rules=tuple(rules),
        atom_defs={k: resolve(v) for k, v in defines.items()},
    )


def format_model(m: Model) -> str:
    """Model text in nuXmv syntax; ``parse_model`` reads it back unchanged."""
    lines = ["MODULE main", "VAR"]
    for name, dom in m.variables.items():
        if dom == (False, True):
            typ = "boolean"
        elif all(isinstance(v, int) and not isinstance(v, bool) for v in dom) and list(dom) == list(
            range(dom[0], dom[-1] + 1)
        ):
            typ = f"{dom[0]}..{dom[-1]}"
        else:
            typ = "{" + ", ".join(format_value(v) for v in dom) + "}"
        lines.append(f"  {name} : {typ};")
    if m.atom_defs:
        lines.append("DEFINE")
        lines.extend(f"  {a} := {format_expr(e)};" for a, e in m.atom_defs.items())
    lines += ["INIT", f"  {format_expr(m.init)};"]
    for var in m.variables:
        rules = [r for r in m.rules if r.var == var]
        if not rules:
            continue
        lines += ["TRANS", "  case"]
        for r in rules:
            op = "in" if isinstance(r.rhs, SetExpr) else "="
            lines.append(f"    {format_expr(r.guard)} : next({var}) {op} {format_expr(r.rhs)};")
        lines.append("  esac;")
    return "\n".join(lines) + "\n"


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())
