"""CLI subcommands and exit codes."""

from __future__ import annotations

import json

import pytest

from tracedoc import jsonio
from tracedoc.cli import main
from tracedoc.gateway import ENV_BACKEND, ENV_MOCK_SCRIPT
from tracedoc.project import load_project


@pytest.fixture()
def mock_env(monkeypatch, tmp_path):
    def set_script(responses):
        script = tmp_path / "script.json"
        script.write_text(json.dumps(responses), encoding="utf-8")
        monkeypatch.setenv(ENV_BACKEND, "mock")
        monkeypatch.setenv(ENV_MOCK_SCRIPT, str(script))

    return set_script


class TestInterpret:
    def test_success_exit_zero_prints_expression(self, scratch_project, mock_env, capsys):
        path = scratch_project("lstm_project.json")
        project = load_project(path)
        # Reset to an unspliced document; registry id 1 is the "67" fragment.
        _reset_to_paragraph(project, path)
        mock_env(['(model_ "LSTM" tableData).time_s'])
        code = main(["interpret", str(path), "1"])
        assert code == 0
        assert '(model_ "LSTM" tableData).time_s' in capsys.readouterr().out

    def test_garbled_mock_exit_three(self, scratch_project, mock_env):
        path = scratch_project("lstm_project.json")
        _reset_to_paragraph(load_project(path), path)
        mock_env(["garbled ~~~"])
        assert main(["interpret", str(path), "1", "--max-retries", "1"]) == 3

    def test_mismatch_exit_two_prints_both_strings(self, scratch_project, mock_env, capsys):
        path = scratch_project("improve_project.json")
        mock_env(['trendWord (findWithKey_ "layers" 3 tableData).f1 '
                  '(findWithKey_ "layers" 1 tableData).f1 improveWord'])
        code = main(["interpret", str(path), "0", "--max-retries", "1"])
        out = capsys.readouterr().out
        assert code == 2
        assert "does not further improve" in out and "further improves" in out

    def test_transport_failure_exit_four(self, scratch_project, mock_env):
        path = scratch_project("lstm_project.json")
        _reset_to_paragraph(load_project(path), path)
        mock_env([])
        assert main(["interpret", str(path), "1"]) == 4

    def test_unknown_fragment_exit_one(self, scratch_project, mock_env):
        path = scratch_project("lstm_project.json")
        mock_env([])
        assert main(["interpret", str(path), "404"]) == 1

    def test_revise_goal_then_approve(self, scratch_project, mock_env, capsys):
        path = scratch_project("improve_project.json")
        mock_env(['trendWord (findWithKey_ "layers" 3 tableData).f1 '
                  '(findWithKey_ "layers" 1 tableData).f1 improveWord'])
        assert main(["interpret", str(path), "0", "--max-retries", "1"]) == 2
        assert main(["interpret", str(path), "--revise-goal"]) == 0
        assert main(["interpret", str(path), "--approve"]) == 0
        project = load_project(path)
        assert [r.action for r in project.session.revisions] == \
            ["init", "revise_goal", "approve"]

    def test_no_target_flag_builds_bare_tag(self, scratch_project, mock_env, monkeypatch):
        path = scratch_project("improve_project.json")
        project = load_project(path)
        project.paragraph_value = project.paragraph
        from tracedoc.project import save_project
        save_project(project)
        captured = {}

        import tracedoc.cli as cli_module

        def fake_synthesize(task, gateway, max_retries=5, model_name="default"):
            captured["paragraph"] = task.paragraph
            from tracedoc.agents import FailNoExpression
            return FailNoExpression("stub", 1)

        monkeypatch.setattr(cli_module, "synthesize", fake_synthesize)
        mock_env([])
        assert main(["interpret", str(path), "0", "--no-target"]) == 3
        assert "[REPLACE]" in captured["paragraph"]


class TestSuggest:
    def test_ner_demo_annotates_known_values(self, scratch_project, mock_env, demo_dir, capsys):
        responses = jsonio.load_file(demo_dir / "mocks" / "suggest_ner.json")
        path = scratch_project("ner_project.json")
        mock_env(responses)
        assert main(["suggest", str(path)]) == 0
        out = capsys.readouterr().out
        for value in ("[REPLACE value=91.57]", '[REPLACE value="better"]',
                      '[REPLACE value="the best"]', "[REPLACE value=91.26]"):
            assert value in out
        project = load_project(path)
        assert len(project.registry) == 5
        assert project.paragraph.startswith("For NER (Table 7)")  # preserved

    def test_rerun_is_idempotent_on_registry(self, scratch_project, mock_env, demo_dir):
        responses = jsonio.load_file(demo_dir / "mocks" / "suggest_ner.json")
        path = scratch_project("ner_project.json")
        mock_env(responses * 2)
        assert main(["suggest", str(path)]) == 0
        first = [e.to_json() for e in load_project(path).registry]
        assert main(["suggest", str(path)]) == 0
        second = [e.to_json() for e in load_project(path).registry]
        assert first == second

    def test_empty_paragraph_errors(self, tmp_path, mock_env, capsys):
        jsonio.dump_file(tmp_path / "p.json", {
            "formatVersion": 1, "datasets": {}, "imports": [],
            "code": "", "paragraph": ""})
        mock_env(["anything"])
        assert main(["suggest", str(tmp_path / "p.json")]) == 1
        assert "empty paragraph" in capsys.readouterr().err


class TestRender:
    def test_wire_contains_growing_fragment(self, demo_dir, capsys):
        assert main(["render", str(demo_dir / "lstm_project.json")]) == 0
        wire = json.loads(capsys.readouterr().out)
        growing = next(f for f in wire["fragments"] if f["text"] == "growing")
        assert len(growing["cells"]) == 2

    def test_page_is_self_contained_html(self, demo_dir, capsys):
        assert main(["render", str(demo_dir / "lstm_project.json"),
                     "--format", "page"]) == 0
        html = capsys.readouterr().out
        assert html.startswith("<!DOCTYPE html>")
        assert "wire-data" in html and "growing" in html

    def test_literal_only_project(self, tmp_path, capsys, lstm_rows):
        jsonio.dump_file(tmp_path / "p.json", {
            "formatVersion": 1, "datasets": {"tableData": lstm_rows},
            "imports": [], "code": "", "paragraph": "only words"})
        assert main(["render", str(tmp_path / "p.json")]) == 0
        wire = json.loads(capsys.readouterr().out)
        assert wire["fragments"] == []

    def test_broken_hole_names_hole_nonzero_exit(self, scratch_project, capsys):
        path = scratch_project("lstm_project.json")
        raw = jsonio.load_file(path)
        for revision in raw["session"]["revisions"]:
            for seg in revision["segments"]:
                if seg.get("kind") == "hole" and seg["id"] == 0:
                    seg["expr"] = '(findWithKey_ "model" "GONE" tableData).time_s'
        jsonio.dump_file(path, raw)
        assert main(["render", str(path)]) == 1
        assert "hole 0" in capsys.readouterr().err


class TestCtest:
    def test_demo_suite_nonzero_exit(self, demo_dir, scratch_project, tmp_path, capsys):
        suite = scratch_project("lstm_suite.json")
        code = main(["ctest", str(suite), str(demo_dir / "lstm_project.json"),
                     "--report", str(tmp_path / "report.json")])
        assert code == 1
        out = capsys.readouterr().out
        assert "retrieval-wrong-row" in out and "CounterfactualError" in out
        report = jsonio.load_file(tmp_path / "report.json")
        assert report["totals"]["counterfactual_errors"] == 2

    def test_clean_suite_exit_zero(self, demo_dir, tmp_path, capsys):
        suite = {"cases": [{
            "id": "identity", "category": "data_retrieval",
            "gold": '(findWithKey_ "model" "LSTM" tableData).time_s',
            "mutations": [{"op": "set", "where": {"model": "LSTM"},
                           "field": "time_s", "value": 99}],
            "expectation": {"kind": "match_gold"}}]}
        jsonio.dump_file(tmp_path / "s.json", suite)
        assert main(["ctest", str(tmp_path / "s.json"),
                     str(demo_dir / "lstm_project.json"),
                     "--report", str(tmp_path / "r.json")]) == 0

    def test_invalid_suite_validation_message(self, demo_dir, tmp_path, capsys):
        suite = {"cases": [{
            "id": "broken", "category": "data_retrieval",
            "gold": '(findWithKey_ "model" "GONE" tableData).time_s',
            "mutations": [{"op": "delete", "where": {"model": "CNN"}}],
            "expectation": {"kind": "match_gold"}}]}
        jsonio.dump_file(tmp_path / "s.json", suite)
        assert main(["ctest", str(tmp_path / "s.json"),
                     str(demo_dir / "lstm_project.json")]) == 1
        assert "self-consistency" in capsys.readouterr().err


def _reset_to_paragraph(project, path):
    """Drop the approved revisions, keep the registry over the raw paragraph."""
    from tracedoc.project import save_project
    from tracedoc.workflow import Session
    project.session = Session.start(project.base_document())
    save_project(project, path)
