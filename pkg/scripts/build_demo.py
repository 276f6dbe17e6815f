#!/usr/bin/env python3
"""Regenerate the demo/ fixtures from the gold corpus.

Demo files are derived artifacts; building them through the real document
operations keeps splice offsets, registry ids, and the recorded suggestion
transcript consistent with the library.
"""

from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from tracedoc import jsonio
from tracedoc.agents import suggest, suggestion_system_prompt
from tracedoc.docmodel import TargetFragment, splice
from tracedoc.gateway import MockGateway, Transcript
from tracedoc.lang.parser import parse_expr
from tracedoc.project import Project, RegistryEntry, save_project

DEMO = REPO / "demo"

CORPUS = jsonio.loads(
    resources.files("tracedoc").joinpath("data/gold_corpus.json").read_text(encoding="utf-8"))


def _suggestion_prompt_example() -> tuple[str, str]:
    """The worked NER example embedded in the suggestion system prompt:
    the raw paragraph and its annotated counterpart."""
    text = suggestion_system_prompt()
    paragraph = text.split("Paragraph:\n", 1)[1].split("\n\nData:", 1)[0]
    response = text.split("OUTPUT EXAMPLE\n\n", 1)[1].rstrip("\n")
    return paragraph, response


def build_lstm_project() -> None:
    """Two approved holes over the timing table: the trend word and the
    looked-up value, which share a cell and therefore group."""
    paragraph = "The training time per epoch growing from 67 seconds to 106 seconds."
    project = Project(
        path=DEMO / "lstm_project.json",
        dataset_refs={"tableData": CORPUS["tables"]["lstm"]},
        datasets={"tableData": CORPUS["tables"]["lstm"]},
        import_paths=[], import_sources=(), code="",
        paragraph=paragraph, paragraph_value=None,
    )
    session = project.session

    growing = TargetFragment(paragraph.index("growing"),
                             paragraph.index("growing") + len("growing"), "growing")
    entry = project.add_manual_fragment(growing)
    doc = splice(session.head, growing, parse_expr(
        'trendWord (model_ "BiLSTM" tableData).time_s '
        '(model_ "LSTM" tableData).time_s growShrink'), entry.id)

    text = "".join(s.text if hasattr(s, "text") else s.text_hint for s in doc.segments)
    sixty_seven = TargetFragment(text.index("67"), text.index("67") + 2, "67")
    entry2 = project.add_manual_fragment(sixty_seven)
    doc = splice(doc, sixty_seven, parse_expr('(model_ "LSTM" tableData).time_s'), entry2.id)

    from tracedoc.workflow import Revision
    import time
    session.revisions.append(Revision(doc, 0, "approve", time.time()))
    save_project(project)


def build_ner_project() -> None:
    paragraph, response = _suggestion_prompt_example()
    project = Project(
        path=DEMO / "ner_project.json",
        dataset_refs={"tableData": CORPUS["tables"]["ner"]},
        datasets={"tableData": CORPUS["tables"]["ner"]},
        import_paths=[], import_sources=(), code="",
        paragraph=paragraph, paragraph_value=None,
    )
    save_project(project)

    # Record the scripted suggestion exchange so it can be replayed.
    transcript_path = DEMO / "transcripts" / "suggest_ner.jsonl"
    transcript_path.parent.mkdir(parents=True, exist_ok=True)
    transcript_path.unlink(missing_ok=True)
    gateway = MockGateway([response], Transcript(path=transcript_path))
    result = suggest(paragraph, project.datasets, gateway)
    assert len(result.fragments) == 5, result
    (DEMO / "mocks").mkdir(exist_ok=True)
    (DEMO / "mocks" / "suggest_ner.json").write_text(
        jsonio.dumps([response]) + "\n", encoding="utf-8")


def build_improve_project() -> None:
    """Fixture for the goal-revision path: the paragraph claims no improvement
    while the data shows one, so synthesis lands on a mismatched s'."""
    paragraph = ("Stacking more layers of BiLSTMs does not further improve "
                 "the F1-score over a single layer.")
    code = ('let improveWord GT = "further improves"; '
            'improveWord LT = "does not further improve"; '
            'improveWord EQ = "does not further improve";')
    rows = [{"layers": 1, "f1": 91.02}, {"layers": 3, "f1": 91.06}]
    project = Project(
        path=DEMO / "improve_project.json",
        dataset_refs={"tableData": rows},
        datasets={"tableData": rows},
        import_paths=[], import_sources=(), code=code,
        paragraph=paragraph, paragraph_value=None,
    )
    frag_text = "does not further improve"
    at = paragraph.index(frag_text)
    project.registry.append(
        RegistryEntry(project.fresh_id(),
                      TargetFragment(at, at + len(frag_text), frag_text)))
    save_project(project)

    expr = ('trendWord (findWithKey_ "layers" 3 tableData).f1 '
            '(findWithKey_ "layers" 1 tableData).f1 improveWord')
    (DEMO / "mocks").mkdir(exist_ok=True)
    (DEMO / "mocks" / "interpret_improve.json").write_text(
        jsonio.dumps([expr]) + "\n", encoding="utf-8")
    (DEMO / "mocks" / "interpret_growing.json").write_text(
        jsonio.dumps(['trendWord (model_ "BiLSTM" tableData).time_s '
                      '(model_ "LSTM" tableData).time_s growShrink']) + "\n",
        encoding="utf-8")
    (DEMO / "mocks" / "interpret_67.json").write_text(
        jsonio.dumps(['(model_ "LSTM" tableData).time_s']) + "\n", encoding="utf-8")
    (DEMO / "mocks" / "interpret_ner.json").write_text(
        jsonio.dumps(['(model_ "S-LSTM" tableData).f1']) + "\n", encoding="utf-8")


def build_suite() -> None:
    suite = {
        "cases": [
            {
                "id": "retrieval-wrong-row",
                "category": "data_retrieval",
                "complexity": 1,
                "gold": '(findWithKey_ "model" "LSTM" tableData).time_s',
                "candidate": '(findWithKey_ "model" "LSTM2" tableData).time_s',
                "mutations": [
                    {"op": "set", "where": {"model": "LSTM"}, "field": "time_s", "value": 250}
                ],
                "expectation": {"kind": "expect_string", "value": "250"}
            },
            {
                "id": "retrieval-survives-deletion",
                "category": "data_retrieval",
                "complexity": 1,
                "gold": '(findWithKey_ "model" "LSTM" tableData).time_s',
                "mutations": [
                    {"op": "delete", "where": {"model": "CNN"}}
                ],
                "expectation": {"kind": "match_gold"}
            },
            {
                "id": "trend-not-hardcoded",
                "category": "comparison",
                "complexity": 2,
                "gold": 'trendWord (model_ "BiLSTM" tableData).time_s (model_ "LSTM" tableData).time_s growShrink',
                "candidate": '"growing"',
                "mutations": [
                    {"op": "set", "where": {"model": "BiLSTM"}, "field": "time_s", "value": 50}
                ],
                "expectation": {"kind": "match_gold"}
            },
            {
                "id": "lookup-row-removed",
                "category": "data_retrieval",
                "complexity": 1,
                "gold": '(model_ "S-LSTM" tableData).time_s',
                "mutations": [
                    {"op": "delete", "where": {"model": "S-LSTM"}}
                ],
                "expectation": {"kind": "expect_string", "value": "80"}
            },
            {
                "id": "constant-survives-gold-error",
                "category": "data_retrieval",
                "complexity": 1,
                "gold": '(model_ "CNN" tableData).time_s',
                "candidate": "52",
                "mutations": [
                    {"op": "delete", "where": {"model": "CNN"}}
                ],
                "expectation": {"kind": "expect_string", "value": "52"}
            }
        ]
    }
    jsonio.dump_file(DEMO / "lstm_suite.json", suite)


def main() -> None:
    DEMO.mkdir(exist_ok=True)
    build_lstm_project()
    build_ner_project()
    build_improve_project()
    build_suite()
    print("demo fixtures written to", DEMO)


if __name__ == "__main__":
    main()
