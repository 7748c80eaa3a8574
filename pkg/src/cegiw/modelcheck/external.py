"""Bridge to an external nuXmv-style bounded model checker."""

from __future__ import annotations

import os
import re
import subprocess
import tempfile

from cegiw.lasso import LassoTrace, canonicalize
from cegiw.modelcheck.checker import CheckVerdict, HoldsUpToBound, Violated
from cegiw.modelcheck.model import Model, ModelError, Value, format_model
from cegiw.mtl import FALSE, And, Atom, Formula, Not, Or, Release, Top, Until, to_ltl


class ExternalCheckerError(RuntimeError):
    pass


def ltl_text(phi: Formula) -> str:
    """LTL in nuXmv syntax. Intervals must be [1,1] or [0,inf]."""
    if isinstance(phi, Top):
        return "TRUE"
    if phi == FALSE:
        return "FALSE"
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Not):
        return f"!{_wrap(phi.operand)}"
    if isinstance(phi, And):
        return f"({ltl_text(phi.left)} & {ltl_text(phi.right)})"
    if isinstance(phi, Or):
        return f"({ltl_text(phi.left)} | {ltl_text(phi.right)})"
    i = phi.interval
    if isinstance(phi, Until):
        if (i.lo, i.hi) == (1, 1) and isinstance(phi.left, Top):
            return f"X {_wrap(phi.right)}"
        if (i.lo, i.hi) == (0, None):
            if isinstance(phi.left, Top):
                return f"F {_wrap(phi.right)}"
            return f"({ltl_text(phi.left)} U {ltl_text(phi.right)})"
    if isinstance(phi, Release) and (i.lo, i.hi) == (0, None):
        if phi.left == FALSE:
            return f"G {_wrap(phi.right)}"
        return f"({ltl_text(phi.left)} V {ltl_text(phi.right)})"
    raise ValueError(f"interval {i} has no LTL counterpart; expand with to_ltl first")


def _wrap(phi: Formula) -> str:
    s = ltl_text(phi)
    return s if s.startswith("(") or isinstance(phi, (Atom, Top)) or phi == FALSE else f"({s})"


def emit_external_problem(m: Model, phi: Formula) -> tuple[str, str]:
    """(model text, ``LTLSPEC`` line) for the external checker."""
    return format_model(m), f"LTLSPEC {ltl_text(to_ltl(phi))}\n"


# --- counterexample traces ------------------------------------------------------

_STATE = re.compile(r"^\s*->\s*(?:State|Input)\s*:\s*(\d+)\.(\d+)\s*<-\s*$")
_ASSIGN = re.compile(r"^\s*([A-Za-z_][\w$#.\[\]]*)\s*=\s*(\S+)\s*$")
_LOOP = re.compile(r"^\s*--\s*Loop starts here\s*$")
_TRACE_START = re.compile(r"^\s*Trace (?:Description|Type)\s*:", re.I)


def _value(text: str) -> Value:
    if text == "TRUE":
        return True
    if text == "FALSE":
        return False
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    return text


def parse_external_counterexample(text: str, m: Model) -> LassoTrace:
    """Lasso from a nuXmv textual trace.

    States list only changed variables, so values carry over. When the last
    state repeats the loop-start state it is dropped.
    """
    states: list[dict[str, Value]] = []
    loop_marks: list[int] = []
    pending_loop = False
    current: dict[str, Value] | None = None
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if _LOOP.match(line):
            pending_loop = True
            continue
        if _STATE.match(line):
            current = dict(states[-1]) if states else {}
            states.append(current)
            if pending_loop:
                loop_marks.append(len(states) - 1)
                pending_loop = False
            continue
        if current is None:
            continue  # banner and spec lines
        if (am := _ASSIGN.match(line)) is not None:
            name, val = am.groups()
            if name in m.variables:
                current[name] = _value(val)
            continue
        if line.lstrip().startswith("--"):
            continue
        raise ModelError(f"line {n}: cannot parse trace line {line.strip()!r}")
    if not states:
        raise ModelError("no states in counterexample trace")
    if not loop_marks:
        raise ModelError("counterexample has no loop marker; a lasso is required")
    for i, st in enumerate(states):
        missing = set(m.variables) - set(st)
        if missing:
            raise ModelError(f"state {i + 1} leaves {', '.join(sorted(missing))} unassigned")
        for k, v in st.items():
            if v not in m.variables[k]:
                raise ModelError(f"state {i + 1}: {k} = {v} is outside its domain")

    rows = [tuple(st[k] for k in m.variables) for st in states]
    loop = loop_marks[-1]
    last = len(rows) - 1
    for mark in reversed(loop_marks):
        if mark < last and rows[mark] == rows[last]:
            loop, rows = mark, rows[:-1]
            break
    atoms = [m.project(r) for r in rows]
    return canonicalize(atoms[:loop], atoms[loop:])


def split_traces(text: str) -> list[str]:
    """Split checker output holding several traces into one chunk per trace."""
    chunks: list[list[str]] = []
    for line in text.splitlines():
        if _TRACE_START.match(line) or not chunks:
            chunks.append([])
        chunks[-1].append(line)
    return ["\n".join(c) for c in chunks if any(_STATE.match(l) for l in c)]


class ExternalChecker:
    """Runs ``cmd -bmc -bmc_length <bound> <file>`` and reads the verdict."""

    def __init__(self, cmd: str, timeout: float = 60.0):
        self.cmd = cmd
        self.timeout = timeout

    def check(self, m: Model, phi: Formula, bound: int) -> CheckVerdict:
        model_text, spec = emit_external_problem(m, phi)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "problem.smv")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(model_text + spec)
            try:
                proc = subprocess.run(
                    [self.cmd, "-bmc", "-bmc_length", str(bound), path],
                    capture_output=True,
                    text=True,
                    timeout=self.timeout,
                )
            except subprocess.TimeoutExpired as exc:
                raise ExternalCheckerError(f"{self.cmd} timed out after {self.timeout}s") from exc
            except OSError as exc:
                raise ExternalCheckerError(f"cannot run {self.cmd}: {exc}") from exc
        if proc.returncode != 0:
            raise ExternalCheckerError(
                f"{self.cmd} exited with status {proc.returncode}: {proc.stderr.strip()[:500]}"
            )
        return parse_checker_output(proc.stdout, m, bound)


def parse_checker_output(out: str, m: Model, bound: int) -> CheckVerdict:
    if re.search(r"specification .* is false", out):
        traces = [parse_external_counterexample(t, m) for t in split_traces(out)]
        if not traces:
            raise ExternalCheckerError("checker reported a violation without a trace")
        return Violated(tuple(traces))
    if re.search(r"no counterexample found with bound|specification .* is true", out):
        return HoldsUpToBound(bound)
    raise ExternalCheckerError("unrecognised checker output")
