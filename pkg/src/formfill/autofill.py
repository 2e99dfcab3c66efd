"""Iterative autofill of partial form records.

Filling runs in synchronous stages: every rule whose arguments are available
in the PREVIOUS stage's value map fires against that map, so derived values
never depend on rule declaration order. Complete-mode rules need all of their
arguments; partial-mode rules need at least one and see the rest as missing.
User-provided values are validated up front and never overwritten.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .expr import MISSING, EvalError, eval_expr
from .filling import AnalysisReport, analyze, suggest_additional, suggest_by_rule_modes
from .formspec import FieldDecl, FormSpec, induced_graph

INTEGRALITY_TOL = 1e-9

Value = int | float | str


class FormValueError(ValueError):
    """A user-supplied value was rejected; carries the offending field id."""

    def __init__(self, field: str, message: str):
        super().__init__(message)
        self.field = field


class UnknownFieldError(FormValueError):
    def __init__(self, field: str):
        super().__init__(field, f"unknown field {field!r}")


class FieldTypeError(FormValueError):
    pass


class RuleEvalError(ValueError):
    """A replacement rule failed while computing its target."""

    def __init__(self, target: str, message: str):
        super().__init__(f"rule for {target!r}: {message}")
        self.target = target


@dataclass(frozen=True)
class FilledValue:
    value: Value
    origin: str  # 'user' | 'derived'


@dataclass(frozen=True)
class TraceEntry:
    target: str
    args: tuple[str, ...]
    stage: int  # 1 = first derivation wave


@dataclass(frozen=True)
class FillReport:
    values: Mapping[str, FilledValue]  # VertexId order
    trace: tuple[TraceEntry, ...]
    status: str  # 'filled' | 'incomplete'
    missing: tuple[str, ...]
    suggestions: tuple[str, ...]

    def to_json_dict(self) -> dict[str, object]:
        return {
            "values": {
                fid: {"value": fv.value, "origin": fv.origin}
                for fid, fv in self.values.items()
            },
            "trace": [
                {"target": t.target, "args": list(t.args), "stage": t.stage}
                for t in self.trace
            ],
            "status": self.status,
            "missing": list(self.missing),
            "suggestions": list(self.suggestions),
        }


def validate_input(spec: FormSpec, values: Mapping[str, object]) -> dict[str, Value]:
    """Type-check user input against the field declarations."""
    decls = spec.field_by_id()
    out: dict[str, Value] = {}
    for key in values:
        if key not in decls:
            raise UnknownFieldError(key)
        out[key] = _check_user_value(decls[key], values[key])
    return out


def autofill(spec: FormSpec, values: Mapping[str, object]) -> FillReport:
    """Fill as many fields as the rules allow, starting from user input."""
    decls = spec.field_by_id()
    filled: dict[str, Value] = validate_input(spec, values)
    user_ids = frozenset(filled)
    origin = {fid: "user" for fid in filled}
    rules = sorted(spec.rules, key=lambda r: r.target)
    trace: list[TraceEntry] = []

    stage = 0
    while True:
        stage += 1
        prev = dict(filled)
        derived: list[tuple[str, Value]] = []
        for rule in rules:
            if rule.target in prev:
                continue
            bound = sum(1 for a in rule.args if a in prev)
            needs_all = rule.mode == "complete"
            if (needs_all and bound < len(rule.args)) or bound == 0:
                continue
            env = {a: prev.get(a, MISSING) for a in rule.args}
            try:
                raw = eval_expr(rule.expr, env)
            except EvalError as e:
                raise RuleEvalError(rule.target, str(e)) from e
            derived.append((rule.target, _check_derived_value(decls[rule.target], raw)))
            trace.append(TraceEntry(rule.target, rule.args, stage))
        if not derived:
            break
        for target, value in derived:
            filled[target] = value
            origin[target] = "derived"

    all_ids = spec.field_ids()
    missing = tuple(sorted(set(all_ids) - filled.keys()))
    report_values = {
        fid: FilledValue(filled[fid], origin[fid]) for fid in sorted(filled)
    }
    return FillReport(
        values=report_values,
        trace=tuple(trace),
        status="filled" if not missing else "incomplete",
        missing=missing,
        suggestions=_suggest(spec, user_ids),
    )


def _suggest(spec: FormSpec, provided: frozenset[str]) -> tuple[str, ...]:
    g = induced_graph(spec)
    mode = spec.uniform_mode()
    if mode is not None:
        return tuple(sorted(suggest_additional(g, provided, mode)))
    return tuple(sorted(suggest_by_rule_modes(g, provided, spec.modes_by_target())))


@dataclass(frozen=True)
class SpecConsistency:
    """Graph analysis of a spec plus form-level observations."""

    analysis: AnalysisReport
    mandatory: tuple[str, ...]
    partial_rules_reduce_minimum: bool

    def to_json_dict(self) -> dict[str, object]:
        doc = self.analysis.to_json_dict()
        doc["mandatory"] = list(self.mandatory)
        doc["partial_rules_reduce_minimum"] = self.partial_rules_reduce_minimum
        return doc


def validate_spec_consistency(spec: FormSpec, include_exact: bool = False) -> SpecConsistency:
    """Analyze the induced graph and report mandatory fields.

    The flag records whether declaring rules partial actually buys a smaller
    minimum input set than the greedy complete-mode filling would need.
    """
    g = induced_graph(spec)
    analysis = analyze(g, include_exact=include_exact)
    has_partial = any(r.mode == "partial" for r in spec.rules)
    reduces = has_partial and len(analysis.min_p_filling) < len(analysis.greedy_min_filling)
    return SpecConsistency(
        analysis=analysis,
        mandatory=tuple(sorted(g.sources())),
        partial_rules_reduce_minimum=reduces,
    )


def _check_user_value(decl: FieldDecl, value: object) -> Value:
    if decl.kind == "enum":
        if not isinstance(value, str) or value not in (decl.values or ()):
            raise FieldTypeError(
                decl.id, f"{decl.id!r} must be one of {list(decl.values or ())}, got {value!r}"
            )
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FieldTypeError(decl.id, f"{decl.id!r} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise FieldTypeError(decl.id, f"{decl.id!r} must be finite, got {value!r}")
    checked: Value
    if decl.kind == "integer":
        if abs(value - round(value)) > INTEGRALITY_TOL:
            raise FieldTypeError(decl.id, f"{decl.id!r} must be an integer, got {value!r}")
        checked = int(round(value))
    else:
        checked = float(value)
    if decl.min is not None and checked < decl.min:
        raise FieldTypeError(decl.id, f"{decl.id!r} must be >= {decl.min}, got {value!r}")
    if decl.max is not None and checked > decl.max:
        raise FieldTypeError(decl.id, f"{decl.id!r} must be <= {decl.max}, got {value!r}")
    return checked


def _check_derived_value(decl: FieldDecl, raw: object) -> Value:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise RuleEvalError(decl.id, f"rule produced {raw!r}, not a number")
    if not math.isfinite(raw):
        raise RuleEvalError(decl.id, f"rule produced non-finite value {raw!r}")
    if decl.kind == "integer":
        if abs(raw - round(raw)) > INTEGRALITY_TOL:
            raise RuleEvalError(
                decl.id, f"value {raw!r} is not an integer within tolerance {INTEGRALITY_TOL}"
            )
        return int(round(raw))
    return float(raw)
