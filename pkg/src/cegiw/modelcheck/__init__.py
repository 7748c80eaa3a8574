from cegiw.modelcheck.checker import (
    CheckVerdict,
    HoldsUpToBound,
    Violated,
    check_bounded,
    enumerate_lassos,
)
from cegiw.modelcheck.external import (
    ExternalChecker,
    ExternalCheckerError,
    emit_external_problem,
    parse_external_counterexample,
)
from cegiw.modelcheck.model import Model, ModelError, format_model, load_model, parse_model

__all__ = [
    "CheckVerdict",
    "ExternalChecker",
    "ExternalCheckerError",
    "HoldsUpToBound",
    "Model",
    "ModelError",
    "Violated",
    "check_bounded",
    "emit_external_problem",
    "enumerate_lassos",
    "format_model",
    "load_model",
    "parse_external_counterexample",
    "parse_model",
]
