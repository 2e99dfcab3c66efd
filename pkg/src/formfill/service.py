"""HTTP API over one loaded form spec.

Four endpoints, all stateless: GET /api/schema, GET /api/analysis,
POST /api/fill, POST /api/check. Bodies are UTF-8 JSON; the fill and check
payloads match the fill and check commands byte for byte. Optionally serves
a directory of static UI assets for every non-API path.
"""

from __future__ import annotations

import json
import mimetypes
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .autofill import (
    FieldTypeError,
    RuleEvalError,
    UnknownFieldError,
    autofill,
    validate_spec_consistency,
)
from .filling import EXACT_SEARCH_LIMIT, check_document
from .formspec import FormSpec, form_spec_to_json_dict, induced_graph
from .jsonio import to_json_bytes

JSON_TYPE = "application/json; charset=utf-8"


def _error(code: str, message: str, field: str | None = None) -> dict:
    doc: dict[str, object] = {"code": code, "message": message}
    if field is not None:
        doc["field"] = field
    return doc


class FormService:
    """Pure request dispatch: (method, path, body) to (status, JSON document).

    Keeping this free of sockets makes the API contract directly testable;
    the HTTP handler below is a thin shell around it.
    """

    def __init__(self, spec: FormSpec):
        self.spec = spec
        self.graph = induced_graph(spec)
        schema = form_spec_to_json_dict(spec)
        schema["graph"] = self.graph.to_json_dict()
        schema["mandatory"] = sorted(self.graph.sources())
        self._schema_doc = schema
        include_exact = len(spec.fields) <= EXACT_SEARCH_LIMIT
        self._analysis_doc = validate_spec_consistency(
            spec, include_exact=include_exact
        ).to_json_dict()

    def handle(self, method: str, path: str, body: bytes | None) -> tuple[int, dict | None]:
        if method == "OPTIONS":
            return 204, None
        if path == "/api/schema":
            return self._get_only(method, self._schema_doc)
        if path == "/api/analysis":
            return self._get_only(method, self._analysis_doc)
        if path == "/api/fill":
            return self._post_only(method, body, self._fill)
        if path == "/api/check":
            return self._post_only(method, body, self._check)
        return 404, _error("parse_error", f"unknown endpoint {path!r}")

    def _get_only(self, method: str, doc: dict) -> tuple[int, dict | None]:
        if method != "GET":
            return 405, _error("parse_error", f"{method} not allowed here")
        return 200, doc

    def _post_only(self, method: str, body: bytes | None, op) -> tuple[int, dict | None]:
        if method != "POST":
            return 405, _error("parse_error", f"{method} not allowed here")
        try:
            doc = json.loads(body or b"")
        except json.JSONDecodeError as e:
            return 400, _error("parse_error", f"body is not valid JSON: {e}")
        if not isinstance(doc, dict):
            return 400, _error("parse_error", "body must be a JSON object")
        return op(doc)

    def _fill(self, doc: dict) -> tuple[int, dict]:
        values = doc.get("values")
        if not isinstance(values, dict):
            return 400, _error("parse_error", "body needs a 'values' object")
        try:
            report = autofill(self.spec, values)
        except UnknownFieldError as e:
            return 400, _error("unknown_field", str(e), e.field)
        except FieldTypeError as e:
            return 400, _error("type_error", str(e), e.field)
        except RuleEvalError as e:
            return 422, _error("internal", str(e), e.target)
        return 200, report.to_json_dict()

    def _check(self, doc: dict) -> tuple[int, dict]:
        provided = doc.get("provided")
        if not isinstance(provided, list) or not all(isinstance(p, str) for p in provided):
            return 400, _error("parse_error", "body needs a 'provided' list of field ids")
        mode = doc.get("mode", "complete")
        if mode not in ("complete", "partial"):
            return 400, _error("parse_error", f"mode must be complete or partial, got {mode!r}")
        unknown = [p for p in provided if not self.graph.has_vertex(p)]
        if unknown:
            return 400, _error("unknown_field", f"unknown field {unknown[0]!r}", unknown[0])
        return 200, check_document(self.graph, provided, mode)


def _make_handler(service: FormService, static_root: Path | None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def do_GET(self) -> None:
            if self.path.startswith("/api/") or static_root is None:
                self._dispatch("GET")
            else:
                self._serve_static()

        def do_POST(self) -> None:
            self._dispatch("POST")

        def do_OPTIONS(self) -> None:
            self._dispatch("OPTIONS")

        def _dispatch(self, method: str) -> None:
            length = int(self.headers.get("Content-Length") or 0)
            body = self.rfile.read(length) if length else b""
            status, doc = service.handle(method, self.path, body)
            payload = to_json_bytes(doc) if doc is not None else b""
            self.send_response(status)
            self._cors()
            if payload:
                self.send_header("Content-Type", JSON_TYPE)
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def _serve_static(self) -> None:
            assert static_root is not None
            rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
            target = (static_root / rel).resolve()
            if not target.is_relative_to(static_root) or not target.is_file():
                self._dispatch("GET")  # fall through to the API 404 shape
                return
            ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
            data = target.read_bytes()
            self.send_response(200)
            self._cors()
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def _cors(self) -> None:
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")

        def log_message(self, format: str, *args) -> None:
            sys.stderr.write(
                f"{self.address_string()} {format % args}\n"
            )

    return Handler


def create_server(
    spec: FormSpec,
    host: str = "127.0.0.1",
    port: int = 0,
    static_dir: str | None = None,
) -> ThreadingHTTPServer:
    """Bound, ready-to-run server; raises OSError if the port is taken."""
    static_root = Path(static_dir).resolve() if static_dir else None
    handler = _make_handler(FormService(spec), static_root)
    server = ThreadingHTTPServer((host, port), handler)
    server.daemon_threads = True
    return server


def serve(
    spec: FormSpec,
    host: str = "127.0.0.1",
    port: int = 8080,
    static_dir: str | None = None,
) -> int:
    """Run until interrupted. Returns 4 when the address cannot be bound."""
    try:
        server = create_server(spec, host, port, static_dir)
    except OSError as e:
        print(f"error: cannot bind {host}:{port}: {e}", file=sys.stderr)
        return 4
    actual_port = server.server_address[1]
    print(f"serving form {spec.name!r} on http://{host}:{actual_port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        print("shutting down", file=sys.stderr)
    finally:
        server.server_close()
    return 0
