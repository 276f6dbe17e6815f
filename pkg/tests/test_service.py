"""Project persistence and the HTTP service contracts."""

from __future__ import annotations

import json
import threading
import urllib.error
import urllib.request
from pathlib import Path

import pytest

from tracedoc import jsonio
from tracedoc.gateway import MockGateway
from tracedoc.project import (
    Project, build_wire, load_project, project_to_json, provenance_response,
    save_project,
)
from tracedoc.service import ServiceApp, make_server


class Client:
    def __init__(self, port: int):
        self.port = port
        self.log: list[tuple[str, str, dict | None]] = []

    def request(self, method: str, path: str, body: dict | None = None,
                record: bool = True):
        data = json.dumps(body).encode() if body is not None else None
        req = urllib.request.Request(
            f"http://127.0.0.1:{self.port}{path}", data=data, method=method,
            headers={"Content-Type": "application/json"})
        if record and method == "POST":
            self.log.append((method, path, body))
        try:
            with urllib.request.urlopen(req) as resp:
                return resp.status, json.loads(resp.read())
        except urllib.error.HTTPError as err:
            return err.code, json.loads(err.read())


@pytest.fixture()
def server_factory(scratch_project):
    servers = []

    def start(name="lstm_project.json", responses=(), project_path=None,
              max_retries=1):
        path = project_path or scratch_project(name)
        project = load_project(path)
        app = ServiceApp(project, MockGateway(list(responses)), max_retries=max_retries)
        server = make_server(app)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        servers.append(server)
        return Client(server.server_address[1]), path

    yield start
    for s in servers:
        s.shutdown()
        s.server_close()


class TestProjectPersistence:
    def test_load_save_round_trip_is_byte_stable(self, demo_dir, tmp_path):
        for name in ("lstm_project.json", "ner_project.json", "improve_project.json"):
            project = load_project(demo_dir / name)
            first = tmp_path / f"first_{name}"
            save_project(project, first)
            second = tmp_path / f"second_{name}"
            save_project(load_project(first), second)
            assert first.read_bytes() == second.read_bytes()

    def test_demo_file_is_canonical(self, demo_dir, tmp_path):
        # The shipped file byte-equals its own load/save image.
        source = demo_dir / "lstm_project.json"
        out = tmp_path / "resaved.json"
        save_project(load_project(source), out)
        assert out.read_bytes() == source.read_bytes()

    def test_dataset_by_path_reference(self, tmp_path, lstm_rows):
        jsonio.dump_file(tmp_path / "rows.json", lstm_rows)
        jsonio.dump_file(tmp_path / "p.json", {
            "formatVersion": 1,
            "datasets": {"tableData": {"path": "rows.json"}},
            "imports": [], "code": "",
            "paragraph": "time was 67 seconds",
        })
        project = load_project(tmp_path / "p.json")
        assert project.datasets["tableData"][0]["time_s"] == 67
        save_project(project)
        saved = jsonio.load_file(tmp_path / "p.json")
        assert saved["datasets"]["tableData"] == {"path": "rows.json"}

    def test_imports_resolved_relative_to_project(self, tmp_path, lstm_rows):
        (tmp_path / "helpers.fld").write_text('let twice n = n * 2;', encoding="utf-8")
        jsonio.dump_file(tmp_path / "p.json", {
            "formatVersion": 1,
            "datasets": {"tableData": lstm_rows},
            "imports": ["helpers.fld"], "code": "",
            "paragraph": "x",
        })
        project = load_project(tmp_path / "p.json")
        env = project.build_env()
        from tracedoc.eval import evaluate, coerce_to_string
        from tracedoc.lang import parse_expr
        assert coerce_to_string(evaluate(parse_expr("twice 21"), env))[0] == "42"

    def test_unknown_format_version_rejected(self, tmp_path):
        jsonio.dump_file(tmp_path / "p.json", {"formatVersion": 99})
        from tracedoc.errors import ProjectError
        with pytest.raises(ProjectError, match="formatVersion"):
            load_project(tmp_path / "p.json")

    def test_wire_format_shape(self, demo_dir):
        project = load_project(demo_dir / "lstm_project.json")
        wire = build_wire(project)
        assert wire["formatVersion"] == 1
        assert wire["text"].startswith("The training time")
        growing = next(f for f in wire["fragments"] if f["text"] == "growing")
        assert growing["cells"] == [
            {"dataset": "tableData", "row": 0, "field": "time_s"},
            {"dataset": "tableData", "row": 1, "field": "time_s"}]
        assert [0, 1] in wire["groups"]

    def test_provenance_response_shape(self, demo_dir):
        project = load_project(demo_dir / "lstm_project.json")
        response = provenance_response(project, 0)
        assert response["fragmentId"] == 0
        assert response["linkedFragments"] == [1]
        assert provenance_response(project, 42) is None


class TestHTTPContracts:
    def test_document_and_provenance(self, server_factory):
        client, _ = server_factory()
        status, wire = client.request("GET", "/document")
        assert status == 200 and wire["formatVersion"] == 1
        status, prov = client.request("GET", "/provenance/0")
        assert status == 200
        assert prov["cells"] == [
            {"dataset": "tableData", "row": 0, "field": "time_s"},
            {"dataset": "tableData", "row": 1, "field": "time_s"}]

    def test_404_unknown_fragment(self, server_factory):
        client, _ = server_factory()
        assert client.request("GET", "/provenance/42")[0] == 404
        assert client.request("GET", "/provenance/xyz")[0] == 404
        assert client.request("GET", "/nothing")[0] == 404

    def test_409_wrong_state(self, server_factory):
        client, _ = server_factory()
        for path in ("/approve", "/reject", "/revise-goal"):
            status, body = client.request("POST", path)
            assert status == 409, path
            assert "not allowed" in body["error"]

    def test_422_invalid_span(self, server_factory):
        client, _ = server_factory()
        assert client.request("POST", "/select",
                              {"span": {"start": 9000, "end": 9002}})[0] == 422
        assert client.request("POST", "/select", {})[0] == 422

    def test_400_bad_json(self, server_factory):
        client, _ = server_factory()
        req = urllib.request.Request(
            f"http://127.0.0.1:{client.port}/select", data=b"{not json",
            method="POST", headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req) as resp:
                status = resp.status
        except urllib.error.HTTPError as err:
            status = err.code
        assert status == 400

    def test_502_gateway_failure(self, server_factory):
        client, _ = server_factory(responses=())  # exhausted mock
        status, body = client.request("POST", "/suggest")
        assert status == 502

    def test_select_approve_cycle_persists(self, server_factory):
        client, path = server_factory(
            name="improve_project.json",
            responses=['trendWord (findWithKey_ "layers" 3 tableData).f1 '
                       '(findWithKey_ "layers" 1 tableData).f1 improveWord'])
        status, session = client.request("POST", "/select", {"fragmentId": 0})
        assert status == 200 and session["state"] == "mismatch_decision"
        assert session["sPrime"] == "further improves"

        status, session = client.request("POST", "/revise-goal")
        assert status == 200 and session["state"] == "awaiting_validation"
        status, session = client.request("POST", "/approve")
        assert status == 200 and session["state"] == "awaiting_selection"

        status, wire = client.request("GET", "/document")
        assert "further improves" in wire["text"]
        on_disk = load_project(path)
        assert len(on_disk.session.revisions) == 3

    def test_session_reports_tentative(self, server_factory):
        client, _ = server_factory(
            name="improve_project.json",
            responses=['"does not further improve"'])
        status, session = client.request("POST", "/select", {"fragmentId": 0})
        assert status == 200 and session["state"] == "awaiting_validation"
        assert "tentative" in session
        assert "does not further improve" in session["tentative"]["text"]

    def test_document_reflects_approved_revision(self, server_factory):
        client, _ = server_factory(
            name="improve_project.json",
            responses=['"does not further improve"'])
        client.request("POST", "/select", {"fragmentId": 0})
        before = client.request("GET", "/document")[1]
        assert before["fragments"] == []
        client.request("POST", "/approve")
        after = client.request("GET", "/document")[1]
        assert [f["id"] for f in after["fragments"]] == [0]

    def test_suggest_populates_registry(self, server_factory, demo_dir):
        response = jsonio.load_file(demo_dir / "mocks" / "suggest_ner.json")[0]
        client, path = server_factory(name="ner_project.json", responses=[response])
        status, body = client.request("POST", "/suggest")
        assert status == 200
        assert len(body["fragments"]) == 5
        assert load_project(path).registry[0].fragment.text == "91.57"

    def test_mutation_log_replay_reproduces_project_file(self, server_factory,
                                                         scratch_project, tmp_path):
        responses = ['trendWord (findWithKey_ "layers" 3 tableData).f1 '
                     '(findWithKey_ "layers" 1 tableData).f1 improveWord']
        client, path = server_factory(name="improve_project.json",
                                      responses=responses)
        client.request("POST", "/select", {"fragmentId": 0})
        client.request("POST", "/revise-goal")
        client.request("POST", "/approve")
        final_first = _normalized(path)

        # Fresh copy of the original project; replay the recorded POST log.
        replay_path = tmp_path / "replay.json"
        import shutil
        shutil.copy(Path(__file__).parent.parent / "demo" / "improve_project.json",
                    replay_path)
        replay_client, _ = server_factory(responses=list(responses),
                                          project_path=replay_path)
        for method, route, body in client.log:
            replay_client.request(method, route, body, record=False)
        assert _normalized(replay_path) == final_first


def _normalized(path) -> str:
    """Project file content with volatile timestamps stripped."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    for revision in data.get("session", {}).get("revisions", []):
        revision.pop("timestamp", None)
    return json.dumps(data, sort_keys=True)
