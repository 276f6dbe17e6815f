"""Interpolated-string document model.

A document is an alternating sequence of literal text and expression holes
over named datasets plus helper definitions. Fragment spans address the
*selection text*: literal segments verbatim, holes standing in with the text
they replaced (kept as a hint), which render() keeps aligned with real output
whenever a hole still evaluates to that text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .errors import DocumentError, EvalError
from .eval.interp import coerce_to_string, evaluate
from .eval.prelude import PRELUDE_NAMES, define_defs, prelude
from .eval.values import CellAddress, Env, load_dataset
from .lang.ast import Expr, free_vars
from .lang.parser import parse_defs
from .lang.pretty import pretty


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Hole:
    id: int
    expr: Expr
    text_hint: str


@dataclass(frozen=True)
class TargetFragment:
    start: int
    end: int
    text: str

    def __post_init__(self) -> None:
        if self.end - self.start != len(self.text):
            raise DocumentError(
                f"fragment span {self.start}..{self.end} does not fit text {self.text!r}")


@dataclass(frozen=True)
class RenderedFragment:
    id: int
    start: int
    end: int
    text: str
    cells: frozenset[CellAddress]


@dataclass(frozen=True)
class RenderedDocument:
    text: str
    fragments: tuple[RenderedFragment, ...]
    groups: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Document:
    segments: tuple[Literal | Hole, ...]
    datasets: tuple[tuple[str, tuple], ...]  # name -> rows (row dicts)
    imports: tuple[str, ...]
    code: str

    @property
    def holes(self) -> tuple[Hole, ...]:
        return tuple(s for s in self.segments if isinstance(s, Hole))

    def dataset_rows(self) -> dict[str, list[dict]]:
        return {name: [dict(r) for r in rows] for name, rows in self.datasets}


class RenderError(DocumentError):
    """Evaluation failure inside a hole."""

    def __init__(self, hole_id: int, cause: EvalError):
        self.hole_id = hole_id
        self.cause = cause
        super().__init__(f"hole {hole_id} failed to render: {cause}")


def make_document(paragraph: str, datasets: dict[str, list[dict]],
                  imports: list[str] = (), code: str = "") -> Document:
    frozen = tuple(
        (name, tuple(dict(r) for r in rows)) for name, rows in datasets.items())
    return Document((Literal(paragraph),), frozen, tuple(imports), code)


# -- REPLACE tags ----------------------------------------------------------

_BARE_VALUE = re.compile(r"^-?[0-9]+(\.[0-9]+)?$")
_TAG_OPEN = "[REPLACE"


def _parse_tag(annotated: str, at: int) -> tuple[str, int]:
    """Parse one tag starting at `at`; returns (value text, end offset)."""
    i = at + len(_TAG_OPEN)
    while i < len(annotated) and annotated[i] == " ":
        i += 1
    if not annotated.startswith("value=", i):
        raise DocumentError("malformed REPLACE tag: missing value attribute", at)
    i += len("value=")
    if i < len(annotated) and annotated[i] == '"':
        i += 1
        chars: list[str] = []
        while True:
            if i >= len(annotated):
                raise DocumentError("malformed REPLACE tag: unterminated quoted value", at)
            c = annotated[i]
            if c == '"':
                i += 1
                break
            if c == "\\" and i + 1 < len(annotated):
                chars.append(annotated[i + 1])
                i += 2
            else:
                chars.append(c)
                i += 1
        value = "".join(chars)
    else:
        j = annotated.find("]", i)
        newline = annotated.find("\n", i)
        if j == -1 or (newline != -1 and newline < j):
            raise DocumentError("malformed REPLACE tag: unbalanced bracket", at)
        value = annotated[i:j].strip()
        if not value:
            raise DocumentError("malformed REPLACE tag: empty value", at)
        i = j
    while i < len(annotated) and annotated[i] == " ":
        i += 1
    if i >= len(annotated) or annotated[i] != "]":
        raise DocumentError("malformed REPLACE tag: unbalanced bracket", at)
    return value, i + 1


def parse_replace_tags(annotated: str) -> tuple[str, list[TargetFragment]]:
    """Substitute each `[REPLACE value=…]` tag with its value text.

    Returns the clean paragraph and fragments pointing at the substituted
    spans within it.
    """
    out: list[str] = []
    fragments: list[TargetFragment] = []
    pos = 0
    clean_len = 0
    while True:
        at = annotated.find(_TAG_OPEN, pos)
        if at == -1:
            out.append(annotated[pos:])
            break
        out.append(annotated[pos:at])
        clean_len += at - pos
        value, end = _parse_tag(annotated, at)
        fragments.append(TargetFragment(clean_len, clean_len + len(value), value))
        out.append(value)
        clean_len += len(value)
        pos = end
    return "".join(out), fragments


def format_tag(value: str) -> str:
    if _BARE_VALUE.match(value):
        return f"[REPLACE value={value}]"
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    return f'[REPLACE value="{escaped}"]'


def reinsert_tags(clean: str, fragments: list[TargetFragment]) -> str:
    """Inverse of parse_replace_tags for canonically formatted tags."""
    out: list[str] = []
    pos = 0
    for f in sorted(fragments, key=lambda f: f.start):
        out.append(clean[pos:f.start])
        out.append(format_tag(f.text))
        pos = f.end
    out.append(clean[pos:])
    return "".join(out)


# -- selection text and splicing -------------------------------------------

def selection_text(doc: Document) -> str:
    return "".join(
        s.text if isinstance(s, Literal) else s.text_hint for s in doc.segments)


def fragment_at(doc: Document, start: int, end: int) -> TargetFragment:
    text = selection_text(doc)
    if not (0 <= start <= end <= len(text)):
        raise DocumentError(f"span {start}..{end} outside document", start)
    return TargetFragment(start, end, text[start:end])


def _locate(doc: Document, frag: TargetFragment) -> tuple[int, int]:
    """Index of the literal segment containing frag and frag's offset in it."""
    offset = 0
    for i, seg in enumerate(doc.segments):
        length = len(seg.text) if isinstance(seg, Literal) else len(seg.text_hint)
        if frag.start < offset + length or (frag.start == offset + length == frag.end and
                                            isinstance(seg, Literal)):
            if not isinstance(seg, Literal):
                raise DocumentError(
                    f"span {frag.start}..{frag.end} overlaps computed hole {seg.id}",
                    frag.start)
            if frag.end > offset + length:
                raise DocumentError(
                    f"span {frag.start}..{frag.end} crosses a segment boundary", frag.start)
            actual = seg.text[frag.start - offset:frag.end - offset]
            if actual != frag.text:
                raise DocumentError(
                    f"fragment text {frag.text!r} does not match document text {actual!r}",
                    frag.start)
            return i, frag.start - offset
        offset += length
    raise DocumentError(f"span {frag.start}..{frag.end} outside document", frag.start)


def resolvable_names(doc: Document) -> set[str]:
    names = set(PRELUDE_NAMES) | {name for name, _ in doc.datasets}
    for source in (*doc.imports, doc.code):
        if source:
            names |= {d.name for d in parse_defs(source)}
    return names


def splice(doc: Document, frag: TargetFragment, expr: Expr, hole_id: int) -> Document:
    """Split the containing literal around frag and insert a hole."""
    unresolved = free_vars(expr) - resolvable_names(doc)
    if unresolved:
        raise DocumentError(
            f"expression references unresolved names: {', '.join(sorted(unresolved))}")
    if any(h.id == hole_id for h in doc.holes):
        raise DocumentError(f"hole id {hole_id} already in use")
    index, local = _locate(doc, frag)
    seg = doc.segments[index]
    before, after = seg.text[:local], seg.text[local + len(frag.text):]
    middle: list[Literal | Hole] = []
    if before:
        middle.append(Literal(before))
    middle.append(Hole(hole_id, expr, frag.text))
    if after:
        middle.append(Literal(after))
    segments = doc.segments[:index] + tuple(middle) + doc.segments[index + 1:]
    return replace(doc, segments=segments)


def revise_paragraph(doc: Document, frag: TargetFragment, s_prime: str) -> Document:
    """Replace literal text s with s′; spans after the site shift by the delta."""
    index, local = _locate(doc, frag)
    seg = doc.segments[index]
    new_text = seg.text[:local] + s_prime + seg.text[local + len(frag.text):]
    segments = doc.segments[:index] + (Literal(new_text),) + doc.segments[index + 1:]
    return replace(doc, segments=segments)


def shift_fragment(frag: TargetFragment, site: TargetFragment, new_len: int) -> TargetFragment:
    """Adjust a registry span for a replacement of `site` by `new_len` chars."""
    delta = new_len - (site.end - site.start)
    if frag.start >= site.end:
        return TargetFragment(frag.start + delta, frag.end + delta, frag.text)
    return frag


# -- rendering ---------------------------------------------------------------

def build_env(doc: Document) -> Env:
    env = prelude()
    for name, rows in doc.datasets:
        env.define(name, load_dataset(name, [dict(r) for r in rows]))
    for source in doc.imports:
        define_defs(env, source)
    if doc.code:
        define_defs(env, doc.code)
    return env


def compute_groups(fragments) -> tuple[tuple[int, int], ...]:
    """Unordered pairs of fragment ids whose provenance sets intersect."""
    pairs = []
    for i, a in enumerate(fragments):
        for b in fragments[i + 1:]:
            if a.cells & b.cells:
                pairs.append(tuple(sorted((a.id, b.id))))
    return tuple(sorted(pairs))


def render(doc: Document, env: Env | None = None) -> RenderedDocument:
    if env is None:
        env = build_env(doc)
    parts: list[str] = []
    fragments: list[RenderedFragment] = []
    offset = 0
    for seg in doc.segments:
        if isinstance(seg, Literal):
            parts.append(seg.text)
            offset += len(seg.text)
            continue
        try:
            text, prov = coerce_to_string(evaluate(seg.expr, env))
        except EvalError as err:
            raise RenderError(seg.id, err) from err
        parts.append(text)
        fragments.append(
            RenderedFragment(seg.id, offset, offset + len(text), text, frozenset(prov)))
        offset += len(text)
    frags = tuple(fragments)
    return RenderedDocument("".join(parts), frags, compute_groups(frags))


# -- prompt-facing serialization ---------------------------------------------

def doc_source(doc: Document, tagged: TargetFragment | None = None,
               include_value: bool = True) -> str:
    """The paragraph as interpolated-string source (holes printed as {e}),
    optionally with one fragment replaced by a REPLACE tag."""
    if tagged is not None:
        _locate(doc, tagged)  # validate
    out: list[str] = []
    offset = 0
    for seg in doc.segments:
        if isinstance(seg, Hole):
            out.append("{" + pretty(seg.expr) + "}")
            offset += len(seg.text_hint)
            continue
        text = seg.text
        if tagged is not None and offset <= tagged.start <= offset + len(text):
            local_start = tagged.start - offset
            local_end = tagged.end - offset
            if 0 <= local_start and local_end <= len(text):
                tag = format_tag(tagged.text) if include_value else "[REPLACE]"
                text = text[:local_start] + tag + text[local_end:]
        out.append(text)
        offset += len(seg.text)
    return "".join(out)
