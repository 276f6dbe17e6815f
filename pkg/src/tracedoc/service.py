"""HTTP service over one project.

Every mutation maps 1:1 onto a workflow transition and is persisted to the
project file before the response goes out; replaying a request log against a
fresh copy of the project reproduces the same file (modulo timestamps).
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import jsonio
from .agents import FailNoExpression, suggest, synthesize
from .docmodel import RenderError, fragment_at, render
from .errors import (
    DocumentError, GatewayError, ProjectError, TracedocError, WorkflowError,
)
from .gateway import Gateway
from .lang.pretty import pretty
from .project import (
    Project, build_wire, provenance_response, save_project,
)
from .workflow import AwaitingValidation, MismatchDecision, state_name


class ServiceApp:
    """Route handlers, independent of the HTTP plumbing."""

    def __init__(self, project: Project, gateway: Gateway,
                 max_retries: int = 5, persist: bool = True):
        self.project = project
        self.gateway = gateway
        self.max_retries = max_retries
        self.persist = persist
        self.lock = threading.Lock()

    # -- helpers -------------------------------------------------------------

    def _save(self) -> None:
        if self.persist and self.project.path is not None:
            save_project(self.project)

    def session_payload(self) -> dict:
        session = self.project.session
        state = session.state
        payload: dict = {"state": state_name(state)}
        payload["registry"] = [e.to_json() for e in self.project.registry]
        if isinstance(state, AwaitingValidation):
            payload["fragmentId"] = state.frag_id
            payload["expression"] = pretty(state.expr)
            payload["tentative"] = build_wire(self.project, rendered=render(state.tentative))
        elif isinstance(state, MismatchDecision):
            payload["fragmentId"] = state.frag_id
            payload["expression"] = pretty(state.expr)
            payload["target"] = state.frag.text
            payload["sPrime"] = state.s_prime
        return payload

    # -- GET -------------------------------------------------------------------

    def get_document(self) -> tuple[int, dict]:
        return 200, build_wire(self.project)

    def get_session(self) -> tuple[int, dict]:
        return 200, self.session_payload()

    def get_provenance(self, fragment_id: int) -> tuple[int, dict]:
        response = provenance_response(self.project, fragment_id)
        if response is None:
            return 404, {"error": f"unknown fragment {fragment_id}"}
        return 200, response

    # -- POST ---------------------------------------------------------------------

    def post_select(self, body: dict) -> tuple[int, dict]:
        with self.lock:
            project = self.project
            if "fragmentId" in body:
                entry = project.find_fragment(int(body["fragmentId"]))
                if entry is None:
                    return 404, {"error": f"unknown fragment {body['fragmentId']}"}
            elif "span" in body:
                span = body["span"]
                try:
                    frag = fragment_at(project.session.head,
                                       int(span["start"]), int(span["end"]))
                except (DocumentError, KeyError, TypeError, ValueError) as err:
                    return 422, {"error": f"invalid span: {err}"}
                entry = project.add_manual_fragment(frag)
            else:
                return 422, {"error": "select requires a span or fragmentId"}
            share_target = bool(body.get("shareTarget", True))
            try:
                task = project.session.select_fragment(
                    entry.fragment, entry.id, share_target, project.paragraph_value)
            except WorkflowError as err:
                return 409, {"error": str(err)}
            except DocumentError as err:
                return 422, {"error": f"invalid span: {err}"}
            try:
                outcome = synthesize(task, self.gateway, self.max_retries)
            except GatewayError as err:
                # Transport failure: back to the entry state, then report 502.
                project.session.on_outcome(FailNoExpression(f"transport: {err}", 0))
                self._save()
                return 502, {"error": str(err)}
            project.session.on_outcome(outcome)
            self._save()
            return 200, self.session_payload()

    def post_approve(self) -> tuple[int, dict]:
        with self.lock:
            try:
                self.project.session.approve()
            except WorkflowError as err:
                return 409, {"error": str(err)}
            self._save()
            return 200, self.session_payload()

    def post_reject(self) -> tuple[int, dict]:
        with self.lock:
            try:
                self.project.session.reject()
            except WorkflowError as err:
                return 409, {"error": str(err)}
            self._save()
            return 200, self.session_payload()

    def post_revise_goal(self) -> tuple[int, dict]:
        with self.lock:
            try:
                old, new = self.project.session.revise_goal()
            except WorkflowError as err:
                return 409, {"error": str(err)}
            self.project.shift_registry(old, len(new.text))
            self._save()
            return 200, self.session_payload()

    def post_suggest(self) -> tuple[int, dict]:
        with self.lock:
            project = self.project
            if not project.paragraph:
                return 422, {"error": "empty paragraph"}
            try:
                result = suggest(project.paragraph, project.datasets, self.gateway)
            except GatewayError as err:
                return 502, {"error": str(err)}
            entries = project.replace_suggestions(result.fragments)
            self._save()
            return 200, {
                "annotatedParagraph": result.annotated_paragraph,
                "fragments": [e.to_json() for e in entries],
                "warnings": list(result.warnings),
            }

    # -- dispatch ---------------------------------------------------------------------

    def handle(self, method: str, path: str, body: dict | None) -> tuple[int, dict]:
        try:
            if method == "GET":
                if path == "/document":
                    return self.get_document()
                if path == "/session":
                    return self.get_session()
                if path.startswith("/provenance/"):
                    tail = path[len("/provenance/"):]
                    if not tail.isdigit():
                        return 404, {"error": f"unknown fragment {tail!r}"}
                    return self.get_provenance(int(tail))
            elif method == "POST":
                if path == "/select":
                    return self.post_select(body or {})
                if path == "/approve":
                    return self.post_approve()
                if path == "/reject":
                    return self.post_reject()
                if path == "/revise-goal":
                    return self.post_revise_goal()
                if path == "/suggest":
                    return self.post_suggest()
            return 404, {"error": f"no route {method} {path}"}
        except RenderError as err:
            return 500, {"error": str(err), "holeId": err.hole_id}
        except (ProjectError, TracedocError) as err:
            return 500, {"error": str(err)}


class _Handler(BaseHTTPRequestHandler):
    app: ServiceApp

    def _respond(self, status: int, payload: dict) -> None:
        data = jsonio.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args) -> None:  # quiet by default
        pass

    def do_GET(self) -> None:
        status, payload = self.app.handle("GET", self.path, None)
        self._respond(status, payload)

    def do_POST(self) -> None:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        body: dict | None = None
        if raw:
            try:
                body = json.loads(raw.decode("utf-8"))
            except ValueError:
                self._respond(400, {"error": "request body is not valid JSON"})
                return
        status, payload = self.app.handle("POST", self.path, body)
        self._respond(status, payload)


def make_server(app: ServiceApp, host: str = "127.0.0.1",
                port: int = 0) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"app": app})
    return ThreadingHTTPServer((host, port), handler)


def serve(app: ServiceApp, host: str, port: int) -> None:
    server = make_server(app, host, port)
    bound = server.server_address
    print(f"serving project on http://{bound[0]}:{bound[1]}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
