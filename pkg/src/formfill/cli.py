"""Command-line front-end.

Commands operate on a form-spec file; analyze, check, and suggest also accept
a bare graph document ({"vertices": [...], "edges": [[a, b], ...]}).

Exit codes: 0 success (check/suggest/fill: the record fills), 1 the record
does not fill, 2 parse/type/unknown-field errors, 3 exact search refused by
size guard, 4 serve could not bind.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .autofill import (
    FormValueError,
    RuleEvalError,
    autofill,
    validate_spec_consistency,
)
from .expr import ExprError
from .filling import (
    EXACT_SEARCH_LIMIT,
    TooLargeError,
    analyze,
    check_document,
    suggest_additional,
)
from .formspec import FormSpec, SpecError, induced_graph, parse_form_spec
from .graph import DepGraph, GraphError, graph_from_json_dict
from .jsonio import to_json_bytes

EXIT_OK = 0
EXIT_NOT_FILLING = 1
EXIT_BAD_INPUT = 2
EXIT_TOO_LARGE = 3
EXIT_BIND_FAILURE = 4


class CliError(Exception):
    """Input problem attributable to the invocation; exits with EXIT_BAD_INPUT."""


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.run(args)
    except TooLargeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (CliError, SpecError, ExprError, GraphError, FormValueError, RuleEvalError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formfill",
        description="Analyze form dependency graphs and autofill partial records.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structural analysis of the dependency graph")
    p.add_argument("spec", help="form spec or bare graph JSON file")
    p.add_argument(
        "--exact",
        action="store_true",
        help=f"also search all minimal filling sets (at most {EXACT_SEARCH_LIMIT} fields)",
    )
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(run=_cmd_analyze)

    p = sub.add_parser("check", help="is the provided field set filling?")
    p.add_argument("spec", help="form spec or bare graph JSON file")
    p.add_argument("--provided", default="", help="comma-separated field ids")
    p.add_argument("--mode", choices=("complete", "partial"), default="complete")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(run=_cmd_check)

    p = sub.add_parser("suggest", help="fields to add so the set becomes filling")
    p.add_argument("spec", help="form spec or bare graph JSON file")
    p.add_argument("--provided", default="", help="comma-separated field ids")
    p.add_argument("--mode", choices=("complete", "partial"), default="complete")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(run=_cmd_suggest)

    p = sub.add_parser("fill", help="autofill a record from the given values")
    p.add_argument("spec", help="form spec JSON file")
    p.add_argument(
        "--set",
        dest="assignments",
        action="append",
        default=[],
        metavar="FIELD=VALUE",
        help="user-provided value (repeatable)",
    )
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(run=_cmd_fill)

    p = sub.add_parser("serve", help="serve the HTTP API for one form spec")
    p.add_argument("spec", help="form spec JSON file")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--static", default=None, metavar="DIR", help="also serve UI assets from DIR")
    p.set_defaults(run=_cmd_serve)

    return parser


def _load_document(path: str) -> FormSpec | DepGraph:
    """A form spec, or a bare dependency graph for the analysis commands."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}") from e
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise CliError(f"not valid JSON: {e}") from e
    if isinstance(doc, dict) and "vertices" in doc and "fields" not in doc:
        return graph_from_json_dict(doc)
    return parse_form_spec(raw)


def _require_spec(loaded: FormSpec | DepGraph, command: str) -> FormSpec:
    if isinstance(loaded, DepGraph):
        raise CliError(f"{command} needs a form spec, not a bare graph")
    return loaded


def _graph_of(loaded: FormSpec | DepGraph) -> DepGraph:
    return loaded if isinstance(loaded, DepGraph) else induced_graph(loaded)


def _provided_list(flag: str) -> list[str]:
    return [part.strip() for part in flag.split(",") if part.strip()]


def _emit(doc: dict) -> None:
    sys.stdout.buffer.write(to_json_bytes(doc))
    sys.stdout.buffer.flush()


def _fmt_ids(ids: Sequence[str]) -> str:
    return "{" + ", ".join(ids) + "}"


def _cmd_analyze(args: argparse.Namespace) -> int:
    loaded = _load_document(args.spec)
    if isinstance(loaded, DepGraph):
        doc = analyze(loaded, include_exact=args.exact).to_json_dict()
        spec_doc = None
    else:
        consistency = validate_spec_consistency(loaded, include_exact=args.exact)
        doc = consistency.to_json_dict()
        spec_doc = loaded
    if args.json:
        _emit(doc)
        return EXIT_OK

    if spec_doc is not None:
        print(f"form: {spec_doc.name} ({len(spec_doc.fields)} fields, {len(spec_doc.rules)} rules)")
        print(f"mandatory: {_fmt_ids(doc['mandatory'])}")
    print(f"sources: {_fmt_ids(doc['sources'])}")
    cycles = doc["minimal_cycles"]
    print(f"minimal cycles ({len(cycles)}):")
    for c in cycles:
        print(f"  {_fmt_ids(c['members'])}")
    print(f"sccs ({len(doc['sccs'])}):")
    for comp in doc["sccs"]:
        print(f"  {_fmt_ids(comp)}")
    print(f"source components ({len(doc['source_components'])}):")
    for comp in doc["source_components"]:
        print(f"  {_fmt_ids(comp)}")
    print(f"greedy min filling: {_fmt_ids(doc['greedy_min_filling'])}")
    print(f"min p-filling: {_fmt_ids(doc['min_p_filling'])}")
    if "exact_min_fillings" in doc:
        print(f"exact min fillings ({len(doc['exact_min_fillings'])}):")
        for s in doc["exact_min_fillings"]:
            print(f"  {_fmt_ids(s)}")
    if spec_doc is not None:
        answer = "yes" if doc["partial_rules_reduce_minimum"] else "no"
        print(f"partial rules reduce minimum: {answer}")
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    g = _graph_of(_load_document(args.spec))
    doc = check_document(g, _provided_list(args.provided), args.mode)
    if args.json:
        _emit(doc)
    else:
        print("FILLING" if doc["filling"] else "NOT FILLING")
        for i, stage in enumerate(doc["stages"]):
            print(f"stage {i}: {_fmt_ids(stage)}")
    return EXIT_OK if doc["filling"] else EXIT_NOT_FILLING


def _cmd_suggest(args: argparse.Namespace) -> int:
    g = _graph_of(_load_document(args.spec))
    provided = _provided_list(args.provided)
    suggestions = sorted(suggest_additional(g, provided, args.mode))
    if args.json:
        _emit({"suggestions": suggestions})
    elif suggestions:
        print(f"suggest: {', '.join(suggestions)}")
    else:
        print("suggest: (none)")
    return EXIT_OK if not suggestions else EXIT_NOT_FILLING


def _cmd_fill(args: argparse.Namespace) -> int:
    spec = _require_spec(_load_document(args.spec), "fill")
    values = _parse_assignments(spec, args.assignments)
    report = autofill(spec, values)
    doc = report.to_json_dict()
    if args.json:
        _emit(doc)
    else:
        print(f"status: {doc['status']}")
        for fid, entry in doc["values"].items():
            print(f"{fid} = {entry['value']} ({entry['origin']})")
        if doc["missing"]:
            print(f"missing: {', '.join(doc['missing'])}")
        if doc["suggestions"]:
            print(f"suggest: {', '.join(doc['suggestions'])}")
    return EXIT_OK if doc["status"] == "filled" else EXIT_NOT_FILLING


def _parse_assignments(spec: FormSpec, assignments: Sequence[str]) -> dict[str, object]:
    decls = spec.field_by_id()
    values: dict[str, object] = {}
    for item in assignments:
        field, eq, text = item.partition("=")
        if not eq:
            raise CliError(f"--set needs FIELD=VALUE, got {item!r}")
        if field in values:
            raise CliError(f"field {field!r} set twice")
        decl = decls.get(field)
        if decl is not None and decl.kind == "enum":
            values[field] = text
        elif decl is None:
            values[field] = text  # validation reports the unknown field
        else:
            try:
                values[field] = float(text)
            except ValueError:
                raise CliError(f"value for {field!r} is not a number: {text!r}") from None
    return values


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    spec = _require_spec(_load_document(args.spec), "serve")
    return serve(spec, host=args.host, port=args.port, static_dir=args.static)


if __name__ == "__main__":
    sys.exit(main())
