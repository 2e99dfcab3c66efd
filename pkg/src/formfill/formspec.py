"""Declarative form specifications.

A form spec is a JSON document naming the form, declaring its fields, and
attaching at most one replacement rule per computed field::

    { "name": "weight",
      "fields": [ {"id": "Sex", "label": "Sex (1 male, 0 female)",
                   "kind": "integer", "min": 0, "max": 1}, ... ],
      "rules":  [ {"target": "Age", "args": ["Height"], "mode": "complete",
                   "expr": "if 30 <= Height and Height <= 160 then ..."} ] }

Rules induce the dependency graph (one edge per argument, pointing at the
target), so fields without a rule are exactly the graph's sources: the fields
the user must always supply.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .expr import (
    IDENT_RE,
    KEYWORDS,
    Expression,
    ExprSyntaxError,
    UnknownArgError,
    parse_expression,
)
from .graph import DepGraph, build_graph
from .jsonio import to_json_bytes

FIELD_KINDS = ("number", "integer", "enum")
RULE_MODES = ("complete", "partial")


class SpecError(ValueError):
    """Base class for form-spec parse and validation errors."""


class SpecSyntaxError(SpecError):
    def __init__(self, message: str, location: str):
        super().__init__(f"{location}: {message}")
        self.location = location


class SpecValidationError(SpecError):
    pass


class DuplicateRuleError(SpecError):
    def __init__(self, target: str):
        super().__init__(f"more than one rule targets {target!r}")
        self.target = target


class SelfReferenceError(SpecError):
    def __init__(self, target: str):
        super().__init__(f"rule for {target!r} lists itself as an argument")
        self.target = target


@dataclass(frozen=True)
class FieldDecl:
    id: str
    label: str
    kind: str  # 'number' | 'integer' | 'enum'
    values: tuple[str, ...] | None = None  # enum symbols
    min: float | None = None
    max: float | None = None


@dataclass(frozen=True)
class ReplacementRule:
    target: str
    args: tuple[str, ...]
    mode: str  # 'complete' | 'partial'
    expr_text: str
    expr: Expression


@dataclass(frozen=True)
class FormSpec:
    name: str
    fields: tuple[FieldDecl, ...]
    rules: tuple[ReplacementRule, ...]

    def field_ids(self) -> tuple[str, ...]:
        return tuple(f.id for f in self.fields)

    def field_by_id(self) -> dict[str, FieldDecl]:
        return {f.id: f for f in self.fields}

    def rule_by_target(self) -> dict[str, ReplacementRule]:
        return {r.target: r for r in self.rules}

    def modes_by_target(self) -> dict[str, str]:
        return {r.target: r.mode for r in self.rules}

    def uniform_mode(self) -> str | None:
        """The single mode shared by every rule, or None for a mixed spec.

        A spec with no rules counts as uniformly complete.
        """
        modes = {r.mode for r in self.rules}
        if not modes:
            return "complete"
        if len(modes) == 1:
            return next(iter(modes))
        return None


def induced_graph(spec: FormSpec) -> DepGraph:
    """Dependency graph with one edge arg→target per rule argument."""
    edges = [(a, r.target) for r in spec.rules for a in r.args]
    return build_graph(spec.field_ids(), edges)


def mandatory_fields(spec: FormSpec) -> frozenset[str]:
    """Fields with no rule; identical to the induced graph's sources."""
    return induced_graph(spec).sources()


def parse_form_spec(text: bytes | str) -> FormSpec:
    """Parse and fully validate a form-spec JSON document."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SpecSyntaxError(f"not valid UTF-8: {e}", "<document>") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecSyntaxError(e.msg, f"line {e.lineno} column {e.colno}") from e

    if not isinstance(doc, dict):
        raise SpecSyntaxError("document must be a JSON object", "<document>")
    name = _expect_str(doc, "name", "<document>")
    fields = _parse_fields(_expect_list(doc, "fields", "<document>"))
    if not fields:
        raise SpecValidationError("a form needs at least one field")
    rules = _parse_rules(_expect_list(doc, "rules", "<document>"), fields)
    spec = FormSpec(name, fields, rules)
    induced_graph(spec)  # surfaces any residual graph-level violation
    return spec


def form_spec_to_json_dict(spec: FormSpec) -> dict[str, object]:
    """Plain-data form of a spec, declaration order preserved."""
    fields = []
    for f in spec.fields:
        entry: dict[str, object] = {"id": f.id, "label": f.label, "kind": f.kind}
        if f.values is not None:
            entry["values"] = list(f.values)
        if f.min is not None:
            entry["min"] = f.min
        if f.max is not None:
            entry["max"] = f.max
        fields.append(entry)
    rules = [
        {"target": r.target, "args": list(r.args), "mode": r.mode, "expr": r.expr_text}
        for r in spec.rules
    ]
    return {"name": spec.name, "fields": fields, "rules": rules}


def serialize_form_spec(spec: FormSpec) -> bytes:
    """Byte-stable inverse of parse_form_spec."""
    return to_json_bytes(form_spec_to_json_dict(spec))


def _parse_fields(items: list[object]) -> tuple[FieldDecl, ...]:
    fields: list[FieldDecl] = []
    seen: set[str] = set()
    for i, item in enumerate(items):
        where = f"fields[{i}]"
        if not isinstance(item, dict):
            raise SpecSyntaxError("field declaration must be an object", where)
        fid = _expect_str(item, "id", where)
        if IDENT_RE.match(fid) is None:
            raise SpecValidationError(
                f"field id {fid!r} is not a valid identifier (letters, digits, _)"
            )
        if fid in KEYWORDS:
            raise SpecValidationError(f"field id {fid!r} is a reserved word")
        if fid in seen:
            raise SpecValidationError(f"duplicate field id {fid!r}")
        seen.add(fid)
        label = _expect_str(item, "label", where)
        kind = _expect_str(item, "kind", where)
        if kind not in FIELD_KINDS:
            raise SpecSyntaxError(f"kind must be one of {FIELD_KINDS}, got {kind!r}", where)
        values = item.get("values")
        lo, hi = item.get("min"), item.get("max")
        if kind == "enum":
            if not isinstance(values, list) or not values:
                raise SpecValidationError(f"enum field {fid!r} needs a non-empty values list")
            if not all(isinstance(v, str) for v in values):
                raise SpecValidationError(f"enum field {fid!r} values must be strings")
            if len(set(values)) != len(values):
                raise SpecValidationError(f"enum field {fid!r} repeats a value")
            if lo is not None or hi is not None:
                raise SpecValidationError(f"enum field {fid!r} cannot have min/max")
        else:
            if values is not None:
                raise SpecValidationError(f"numeric field {fid!r} cannot list enum values")
            for key, bound in (("min", lo), ("max", hi)):
                if bound is not None and (isinstance(bound, bool) or not isinstance(bound, (int, float))):
                    raise SpecSyntaxError(f"{key} must be a number", where)
            if lo is not None and hi is not None and lo > hi:
                raise SpecValidationError(f"field {fid!r} has min > max")
        fields.append(
            FieldDecl(
                fid,
                label,
                kind,
                values=tuple(values) if kind == "enum" else None,
                min=lo,
                max=hi,
            )
        )
    return tuple(fields)


def _parse_rules(
    items: list[object], fields: tuple[FieldDecl, ...]
) -> tuple[ReplacementRule, ...]:
    by_id = {f.id: f for f in fields}
    rules: list[ReplacementRule] = []
    targeted: set[str] = set()
    for i, item in enumerate(items):
        where = f"rules[{i}]"
        if not isinstance(item, dict):
            raise SpecSyntaxError("rule must be an object", where)
        target = _expect_str(item, "target", where)
        if target not in by_id:
            raise SpecValidationError(f"rule target {target!r} is not a declared field")
        if by_id[target].kind == "enum":
            raise SpecValidationError(f"enum field {target!r} cannot be a rule target")
        if target in targeted:
            raise DuplicateRuleError(target)
        targeted.add(target)

        raw_args = item.get("args")
        if not isinstance(raw_args, list) or not raw_args:
            raise SpecSyntaxError("args must be a non-empty list", where)
        args: list[str] = []
        for a in raw_args:
            if not isinstance(a, str):
                raise SpecSyntaxError("args must be strings", where)
            if a not in by_id:
                raise UnknownArgError(a)
            if by_id[a].kind == "enum":
                raise SpecValidationError(
                    f"enum field {a!r} cannot be a rule argument (expressions are numeric)"
                )
            if a == target:
                raise SelfReferenceError(target)
            if a in args:
                raise SpecValidationError(f"rule for {target!r} repeats argument {a!r}")
            args.append(a)

        mode = _expect_str(item, "mode", where)
        if mode not in RULE_MODES:
            raise SpecSyntaxError(f"mode must be one of {RULE_MODES}, got {mode!r}", where)
        expr_text = _expect_str(item, "expr", where)
        try:
            expr = parse_expression(expr_text, args, mode)
        except ExprSyntaxError as e:
            raise SpecSyntaxError(str(e), f"{where}.expr") from e
        # UnknownArgError / ModeViolationError propagate as themselves
        rules.append(ReplacementRule(target, tuple(args), mode, expr_text, expr))
    return tuple(rules)


def _expect_str(doc: Mapping[str, object], key: str, where: str) -> str:
    value = doc.get(key)
    if not isinstance(value, str) or not value:
        raise SpecSyntaxError(f"{key} must be a non-empty string", where)
    return value


def _expect_list(doc: Mapping[str, object], key: str, where: str) -> list[object]:
    value = doc.get(key)
    if not isinstance(value, list):
        raise SpecSyntaxError(f"{key} must be a list", where)
    return value
