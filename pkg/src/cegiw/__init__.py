"""Counterexample-guided weakening of MTL intervals."""

from cegiw.context import Context, extract, substitute
from cegiw.driver import BoundOrIterationExhausted, NoWeakening, Weakened, run_cegiw
from cegiw.lasso import LassoTrace
from cegiw.modelcheck import check_bounded, load_model, parse_model
from cegiw.mtl import Formula, Interval, eval_formula, holds, to_ltl
from cegiw.parser import parse_formula, parse_property
from cegiw.weaken import weaken

__all__ = [
    "BoundOrIterationExhausted",
    "Context",
    "Formula",
    "Interval",
    "LassoTrace",
    "NoWeakening",
    "Weakened",
    "check_bounded",
    "eval_formula",
    "extract",
    "holds",
    "load_model",
    "parse_model",
    "parse_formula",
    "parse_property",
    "run_cegiw",
    "substitute",
    "to_ltl",
    "weaken",
]
