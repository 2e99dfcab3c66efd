"""Dependency-graph autofill for forms.

Models a form's replacement rules as a directed graph, decides which input
sets let every remaining field be derived (in complete or missing-tolerant
partial mode), proposes small input sets, and executes the fill.
"""

from .autofill import (
    FieldTypeError,
    FillReport,
    FilledValue,
    FormValueError,
    RuleEvalError,
    SpecConsistency,
    TraceEntry,
    UnknownFieldError,
    autofill,
    validate_input,
    validate_spec_consistency,
)
from .expr import (
    MISSING,
    DivisionByZeroError,
    EvalError,
    EvalTypeError,
    ExprError,
    ExprSyntaxError,
    Expression,
    MissingUnhandledError,
    ModeViolationError,
    UnknownArgError,
    eval_expr,
    parse_expression,
    referenced_args,
)
from .filling import (
    AnalysisReport,
    ClosureTrace,
    TooLargeError,
    analyze,
    closure,
    closure_by_rule_modes,
    dtm,
    exact_min_fillings,
    greedy_min_filling,
    is_filling,
    is_filling_by_cycles,
    is_filling_by_dag,
    is_p_filling_by_path,
    is_p_filling_by_scc,
    min_p_filling,
    pdtm,
    suggest_additional,
    suggest_by_rule_modes,
)
from .formspec import (
    DuplicateRuleError,
    FieldDecl,
    FormSpec,
    ReplacementRule,
    SelfReferenceError,
    SpecError,
    SpecSyntaxError,
    SpecValidationError,
    induced_graph,
    mandatory_fields,
    parse_form_spec,
    serialize_form_spec,
)
from .graph import (
    AdjMatrix,
    Condensation,
    Cycle,
    DepGraph,
    DuplicateVertexError,
    EmptyVertexSetError,
    GraphError,
    SelfLoopError,
    UnknownVertexError,
    build_graph,
    graph_from_json_dict,
)

__version__ = "0.1.0"

__all__ = [
    "AdjMatrix",
    "AnalysisReport",
    "ClosureTrace",
    "Condensation",
    "Cycle",
    "DepGraph",
    "DivisionByZeroError",
    "DuplicateRuleError",
    "DuplicateVertexError",
    "EmptyVertexSetError",
    "EvalError",
    "EvalTypeError",
    "ExprError",
    "ExprSyntaxError",
    "Expression",
    "FieldDecl",
    "FieldTypeError",
    "FillReport",
    "FilledValue",
    "FormSpec",
    "FormValueError",
    "GraphError",
    "MISSING",
    "MissingUnhandledError",
    "ModeViolationError",
    "ReplacementRule",
    "RuleEvalError",
    "SelfLoopError",
    "SelfReferenceError",
    "SpecConsistency",
    "SpecError",
    "SpecSyntaxError",
    "SpecValidationError",
    "TooLargeError",
    "TraceEntry",
    "UnknownArgError",
    "UnknownFieldError",
    "UnknownVertexError",
    "analyze",
    "autofill",
    "build_graph",
    "closure",
    "closure_by_rule_modes",
    "dtm",
    "eval_expr",
    "exact_min_fillings",
    "graph_from_json_dict",
    "greedy_min_filling",
    "induced_graph",
    "is_filling",
    "is_filling_by_cycles",
    "is_filling_by_dag",
    "is_p_filling_by_path",
    "is_p_filling_by_scc",
    "mandatory_fields",
    "min_p_filling",
    "parse_expression",
    "parse_form_spec",
    "pdtm",
    "referenced_args",
    "serialize_form_spec",
    "suggest_additional",
    "suggest_by_rule_modes",
    "validate_input",
    "validate_spec_consistency",
    "__version__",
]
