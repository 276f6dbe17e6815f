"""Document model: REPLACE tags, splicing, rendering, goal revision."""

from __future__ import annotations

import pytest

from tracedoc.docmodel import (
    Document, Hole, Literal, RenderError, TargetFragment, compute_groups,
    doc_source, fragment_at, make_document, parse_replace_tags, reinsert_tags,
    render, revise_paragraph, selection_text, splice,
)
from tracedoc.errors import DocumentError
from tracedoc.eval import CellAddress
from tracedoc.lang import parse_expr


@pytest.fixture()
def lstm_doc(lstm_rows):
    paragraph = "The training time per epoch growing from 67 seconds to 106 seconds."
    return make_document(paragraph, {"tableData": lstm_rows})


def frag_of(doc, text, occurrence=0):
    full = selection_text(doc)
    at = -1
    for _ in range(occurrence + 1):
        at = full.index(text, at + 1)
    return TargetFragment(at, at + len(text), text)


class TestParseReplaceTags:
    def test_bare_numeric_value(self):
        clean, frags = parse_replace_tags("F1-score of [REPLACE value=91.57]")
        assert clean == "F1-score of 91.57"
        assert frags == [TargetFragment(12, 17, "91.57")]

    def test_quoted_value(self):
        clean, frags = parse_replace_tags('performs [REPLACE value="better"] than')
        assert clean == "performs better than"
        assert frags[0].text == "better"

    def test_no_tags(self):
        clean, frags = parse_replace_tags("no quantitative content here")
        assert clean == "no quantitative content here" and frags == []

    def test_span_substring_matches_text(self):
        annotated = ('S-LSTM gives [REPLACE value="the best"] results, '
                     "an F1 of [REPLACE value=91.57].")
        clean, frags = parse_replace_tags(annotated)
        for f in frags:
            assert clean[f.start:f.end] == f.text

    def test_malformed_missing_value(self):
        with pytest.raises(DocumentError, match="missing value"):
            parse_replace_tags("x [REPLACE novalue] y")

    def test_malformed_unbalanced_bracket(self):
        with pytest.raises(DocumentError, match="unbalanced bracket"):
            parse_replace_tags("x [REPLACE value=91.57 y")

    def test_malformed_names_offset(self):
        with pytest.raises(DocumentError) as info:
            parse_replace_tags("ab [REPLACE value=")
        assert info.value.offset == 3

    def test_reinsert_round_trips_byte_for_byte(self):
        annotated = ('For NER, S-LSTM gives [REPLACE value=91.57] which is '
                     '[REPLACE value="better"] than [REPLACE value="the best"] before, '
                     "then [REPLACE value=91.26].")
        clean, frags = parse_replace_tags(annotated)
        assert reinsert_tags(clean, frags) == annotated


class TestSplice:
    def test_splits_literal_around_fragment(self, lstm_doc):
        frag = frag_of(lstm_doc, "67")
        doc = splice(lstm_doc, frag, parse_expr('(model_ "LSTM" tableData).time_s'), 0)
        kinds = [type(s).__name__ for s in doc.segments]
        assert kinds == ["Literal", "Hole", "Literal"]
        assert doc.segments[0].text.endswith("growing from ")
        assert doc.segments[2].text.startswith(" seconds")

    def test_whole_segment_becomes_single_hole(self, lstm_rows):
        doc = make_document("67", {"tableData": lstm_rows})
        frag = frag_of(doc, "67")
        spliced = splice(doc, frag, parse_expr('(model_ "LSTM" tableData).time_s'), 0)
        assert [type(s).__name__ for s in spliced.segments] == ["Hole"]

    def test_fragment_overlapping_hole_rejected(self, lstm_doc):
        doc = splice(lstm_doc, frag_of(lstm_doc, "67"),
                     parse_expr('(model_ "LSTM" tableData).time_s'), 0)
        overlap = TargetFragment(frag_of(doc, "from").start, frag_of(doc, "67").end,
                                 "from 67")
        with pytest.raises(DocumentError, match="hole|boundary"):
            splice(doc, overlap, parse_expr("1"), 1)

    def test_unresolved_free_variables_rejected(self, lstm_doc):
        with pytest.raises(DocumentError, match="unresolved"):
            splice(lstm_doc, frag_of(lstm_doc, "67"), parse_expr("mysteryHelper 3"), 0)

    def test_duplicate_hole_id_rejected(self, lstm_doc):
        doc = splice(lstm_doc, frag_of(lstm_doc, "67"), parse_expr("67"), 0)
        with pytest.raises(DocumentError, match="already in use"):
            splice(doc, frag_of(doc, "106"), parse_expr("106"), 0)

    def test_mismatched_fragment_text_rejected(self, lstm_doc):
        with pytest.raises(DocumentError, match="does not match"):
            splice(lstm_doc, TargetFragment(0, 2, "XX"), parse_expr("1"), 0)


class TestRender:
    def test_comparison_hole_two_cells(self, lstm_doc):
        frag = frag_of(lstm_doc, "growing")
        doc = splice(lstm_doc, frag, parse_expr(
            'trendWord (model_ "BiLSTM" tableData).time_s '
            '(model_ "LSTM" tableData).time_s growShrink'), 0)
        rendered = render(doc)
        assert rendered.text == selection_text(lstm_doc)
        (fragment,) = rendered.fragments
        assert fragment.text == "growing"
        assert fragment.cells == {CellAddress("tableData", 0, "time_s"),
                                  CellAddress("tableData", 1, "time_s")}

    def test_two_holes_reading_same_cell_group(self, lstm_doc):
        doc = splice(lstm_doc, frag_of(lstm_doc, "growing"), parse_expr(
            'trendWord (model_ "BiLSTM" tableData).time_s '
            '(model_ "LSTM" tableData).time_s growShrink'), 0)
        doc = splice(doc, frag_of(doc, "67"),
                     parse_expr('(model_ "LSTM" tableData).time_s'), 1)
        rendered = render(doc)
        assert rendered.groups == ((0, 1),)

    def test_literal_only_document(self, lstm_rows):
        rendered = render(make_document("just words", {"tableData": lstm_rows}))
        assert rendered.text == "just words"
        assert rendered.fragments == () and rendered.groups == ()

    def test_eval_error_tagged_with_hole_id(self, lstm_doc):
        doc = splice(lstm_doc, frag_of(lstm_doc, "67"),
                     parse_expr('(findWithKey_ "model" "LSTM2" tableData).time_s'), 7)
        with pytest.raises(RenderError) as info:
            render(doc)
        assert info.value.hole_id == 7
        assert info.value.cause.kind == "KeyNotFound"

    def test_fragment_spans_are_disjoint_and_ordered(self, lstm_doc):
        doc = splice(lstm_doc, frag_of(lstm_doc, "growing"), parse_expr('"growing"'), 0)
        doc = splice(doc, frag_of(doc, "67"), parse_expr("67"), 1)
        doc = splice(doc, frag_of(doc, "106"), parse_expr("106"), 2)
        rendered = render(doc)
        previous_end = 0
        for f in rendered.fragments:
            assert f.start >= previous_end
            assert rendered.text[f.start:f.end] == f.text
            previous_end = f.end

    def test_groups_recompute_from_fragments(self, lstm_doc):
        doc = splice(lstm_doc, frag_of(lstm_doc, "growing"), parse_expr(
            'trendWord (model_ "BiLSTM" tableData).time_s '
            '(model_ "LSTM" tableData).time_s growShrink'), 0)
        doc = splice(doc, frag_of(doc, "67"),
                     parse_expr('(model_ "LSTM" tableData).time_s'), 1)
        doc = splice(doc, frag_of(doc, "106"),
                     parse_expr('(model_ "BiLSTM" tableData).time_s'), 2)
        rendered = render(doc)
        assert rendered.groups == compute_groups(rendered.fragments)
        assert set(rendered.groups) == {(0, 1), (0, 2)}  # 67 and 106 do not touch

    def test_splice_render_consistency(self, lstm_doc):
        # The hole evaluates to exactly the fragment text, so rendering is
        # unchanged by the splice.
        before = render(lstm_doc).text
        doc = splice(lstm_doc, frag_of(lstm_doc, "67"),
                     parse_expr('(model_ "LSTM" tableData).time_s'), 0)
        assert render(doc).text == before


class TestReviseParagraph:
    def test_replaces_text(self, lstm_rows):
        doc = make_document("it does not further improve accuracy", {"t": lstm_rows})
        frag = frag_of(doc, "does not further improve")
        revised = revise_paragraph(doc, frag, "further improves")
        assert selection_text(revised) == "it further improves accuracy"

    def test_identity_replacement(self, lstm_doc):
        frag = frag_of(lstm_doc, "growing")
        assert selection_text(revise_paragraph(lstm_doc, frag, "growing")) == \
            selection_text(lstm_doc)

    def test_replacement_inside_hole_rejected(self, lstm_doc):
        doc = splice(lstm_doc, frag_of(lstm_doc, "67"), parse_expr("67"), 0)
        inside = frag_of(doc, "67")  # now the hole's hint text
        with pytest.raises(DocumentError, match="hole"):
            revise_paragraph(doc, inside, "99")


class TestDocSource:
    def test_plain_paragraph_with_tag(self, lstm_doc):
        frag = frag_of(lstm_doc, "67")
        source = doc_source(lstm_doc, tagged=frag)
        assert "[REPLACE value=67]" in source
        assert "[REPLACE" not in doc_source(lstm_doc)

    def test_hole_prints_as_interpolation(self, lstm_doc):
        doc = splice(lstm_doc, frag_of(lstm_doc, "67"),
                     parse_expr('(model_ "LSTM" tableData).time_s'), 0)
        source = doc_source(doc)
        assert '{(model_ "LSTM" tableData).time_s}' in source

    def test_tag_without_value(self, lstm_doc):
        frag = frag_of(lstm_doc, "67")
        source = doc_source(lstm_doc, tagged=frag, include_value=False)
        assert "[REPLACE]" in source and "value=" not in source


def test_fragment_at_validates_bounds(lstm_doc):
    with pytest.raises(DocumentError):
        fragment_at(lstm_doc, 0, 10_000)
    frag = fragment_at(lstm_doc, 28, 35)
    assert frag.text == "growing"
