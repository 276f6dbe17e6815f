"""Project file: persistence for datasets, paragraph, fragment registry, and
the authoring session. One widely-readable JSON document, canonical key
order, byte-stable across load/save.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import jsonio
from .docmodel import (
    Document, Hole, Literal, RenderedDocument, TargetFragment, make_document,
    render,
)
from .errors import ProjectError
from .eval.values import Env
from .lang.parser import parse_expr
from .lang.pretty import pretty
from .workflow import (
    AwaitingSelection, AwaitingValidation, MismatchDecision, Revision,
    Session, Synthesizing, state_name,
)

FORMAT_VERSION = 1


@dataclass
class RegistryEntry:
    id: int
    fragment: TargetFragment

    def to_json(self) -> dict:
        return {"id": self.id, "start": self.fragment.start,
                "end": self.fragment.end, "text": self.fragment.text}

    @staticmethod
    def from_json(obj: dict) -> "RegistryEntry":
        return RegistryEntry(
            int(obj["id"]),
            TargetFragment(int(obj["start"]), int(obj["end"]), obj["text"]))


@dataclass
class Project:
    path: Path | None
    dataset_refs: dict
    datasets: dict[str, list[dict]]
    import_paths: list[str]
    import_sources: tuple[str, ...]
    code: str
    paragraph: str
    paragraph_value: str | None
    next_fragment_id: int = 0
    registry: list[RegistryEntry] = field(default_factory=list)
    session: Session = None

    def __post_init__(self) -> None:
        if self.session is None:
            self.session = Session.start(self.base_document())

    def base_document(self) -> Document:
        return make_document(self.paragraph, self.datasets,
                             list(self.import_sources), self.code)

    # -- registry -----------------------------------------------------------

    def fresh_id(self) -> int:
        out = self.next_fragment_id
        self.next_fragment_id += 1
        return out

    def find_fragment(self, fragment_id: int) -> RegistryEntry | None:
        for entry in self.registry:
            if entry.id == fragment_id:
                return entry
        return None

    def replace_suggestions(self, fragments) -> list[RegistryEntry]:
        """Install suggested fragments, reusing ids of unchanged entries."""
        existing = {(e.fragment.start, e.fragment.end, e.fragment.text): e.id
                    for e in self.registry}
        entries = []
        for frag in fragments:
            key = (frag.start, frag.end, frag.text)
            entry_id = existing.get(key)
            if entry_id is None:
                entry_id = self.fresh_id()
            entries.append(RegistryEntry(entry_id, frag))
        self.registry = entries
        return entries

    def add_manual_fragment(self, frag: TargetFragment) -> RegistryEntry:
        entry = RegistryEntry(self.fresh_id(), frag)
        self.registry.append(entry)
        return entry

    def shift_registry(self, site: TargetFragment, new_len: int) -> None:
        delta = new_len - (site.end - site.start)
        if delta == 0:
            return
        out = []
        for e in self.registry:
            f = e.fragment
            if f.start >= site.end:
                out.append(RegistryEntry(
                    e.id, TargetFragment(f.start + delta, f.end + delta, f.text)))
            elif f.start == site.start and f.end == site.end:
                continue  # replaced site; its entry is now stale
            else:
                out.append(e)
        self.registry = out

    # -- rendering ------------------------------------------------------------

    def render(self) -> RenderedDocument:
        return render(self.session.head)

    def build_env(self) -> Env:
        from .docmodel import build_env
        return build_env(self.session.head)


# -- document (de)serialization ------------------------------------------------

def _segments_to_json(doc: Document) -> list[dict]:
    out = []
    for seg in doc.segments:
        if isinstance(seg, Literal):
            out.append({"kind": "literal", "text": seg.text})
        else:
            out.append({"kind": "hole", "id": seg.id,
                        "expr": pretty(seg.expr), "hint": seg.text_hint})
    return out


def _segments_from_json(items, base: Document) -> Document:
    segments = []
    for obj in items:
        if obj["kind"] == "literal":
            segments.append(Literal(obj["text"]))
        elif obj["kind"] == "hole":
            segments.append(Hole(int(obj["id"]), parse_expr(obj["expr"]), obj["hint"]))
        else:
            raise ProjectError(f"unknown segment kind {obj.get('kind')!r}")
    return Document(tuple(segments), base.datasets, base.imports, base.code)


def _fragment_to_json(frag: TargetFragment) -> dict:
    return {"start": frag.start, "end": frag.end, "text": frag.text}


def _fragment_from_json(obj: dict) -> TargetFragment:
    return TargetFragment(int(obj["start"]), int(obj["end"]), obj["text"])


def _state_to_json(state) -> dict:
    out: dict = {"kind": state_name(state)}
    if isinstance(state, Synthesizing):
        out["fragmentId"] = state.frag_id
        out["fragment"] = _fragment_to_json(state.frag)
    elif isinstance(state, AwaitingValidation):
        out["fragmentId"] = state.frag_id
        out["fragment"] = _fragment_to_json(state.frag)
        out["expression"] = pretty(state.expr)
        out["tentativeSegments"] = _segments_to_json(state.tentative)
    elif isinstance(state, MismatchDecision):
        out["fragmentId"] = state.frag_id
        out["fragment"] = _fragment_to_json(state.frag)
        out["expression"] = pretty(state.expr)
        out["sPrime"] = state.s_prime
    return out


def _state_from_json(obj: dict, base: Document):
    kind = obj.get("kind", "awaiting_selection")
    if kind == "awaiting_selection":
        return AwaitingSelection()
    if kind == "synthesizing":
        return Synthesizing(_fragment_from_json(obj["fragment"]), int(obj["fragmentId"]))
    if kind == "awaiting_validation":
        return AwaitingValidation(
            _fragment_from_json(obj["fragment"]), int(obj["fragmentId"]),
            parse_expr(obj["expression"]),
            _segments_from_json(obj["tentativeSegments"], base))
    if kind == "mismatch_decision":
        return MismatchDecision(
            _fragment_from_json(obj["fragment"]), int(obj["fragmentId"]),
            parse_expr(obj["expression"]), obj["sPrime"])
    raise ProjectError(f"unknown session state {kind!r}")


# -- load / save ------------------------------------------------------------------

def load_project(path: str | Path) -> Project:
    path = Path(path)
    try:
        data = jsonio.load_file(path)
    except (OSError, ValueError) as exc:
        raise ProjectError(f"cannot load project {path}: {exc}") from exc
    if data.get("formatVersion") != FORMAT_VERSION:
        raise ProjectError(f"unsupported formatVersion {data.get('formatVersion')!r}")

    dataset_refs = data.get("datasets", {})
    datasets: dict[str, list[dict]] = {}
    for name, ref in dataset_refs.items():
        if isinstance(ref, dict) and "path" in ref:
            rows = jsonio.load_file(path.parent / ref["path"])
        else:
            rows = ref
        if not isinstance(rows, list):
            raise ProjectError(f"dataset {name!r} must be a list of rows")
        datasets[name] = rows

    import_paths = list(data.get("imports", []))
    import_sources = []
    for rel in import_paths:
        try:
            import_sources.append((path.parent / rel).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ProjectError(f"cannot read import {rel}: {exc}") from exc

    project = Project(
        path=path,
        dataset_refs=dataset_refs,
        datasets=datasets,
        import_paths=import_paths,
        import_sources=tuple(import_sources),
        code=data.get("code", ""),
        paragraph=data.get("paragraph", ""),
        paragraph_value=data.get("paragraphValue"),
        next_fragment_id=int(data.get("fragments", {}).get("nextId", 0)),
        registry=[RegistryEntry.from_json(o)
                  for o in data.get("fragments", {}).get("entries", [])],
        session=None,
    )
    session_obj = data.get("session")
    if session_obj:
        base = project.base_document()
        revisions = [
            Revision(_segments_from_json(r["segments"], base),
                     r.get("parent"), r["action"], float(r["timestamp"]))
            for r in session_obj.get("revisions", [])
        ]
        if not revisions:
            raise ProjectError("session requires at least one revision")
        project.session = Session(revisions, _state_from_json(
            session_obj.get("state", {}), base))
    return project


def project_to_json(project: Project) -> dict:
    return {
        "formatVersion": FORMAT_VERSION,
        "datasets": project.dataset_refs,
        "imports": project.import_paths,
        "code": project.code,
        "paragraph": project.paragraph,
        **({"paragraphValue": project.paragraph_value}
           if project.paragraph_value is not None else {}),
        "fragments": {
            "nextId": project.next_fragment_id,
            "entries": [e.to_json() for e in project.registry],
        },
        "session": {
            "state": _state_to_json(project.session.state),
            "revisions": [
                {"action": r.action, "parent": r.parent, "timestamp": r.timestamp,
                 "segments": _segments_to_json(r.document)}
                for r in project.session.revisions
            ],
        },
    }


def save_project(project: Project, path: str | Path | None = None) -> None:
    target = Path(path) if path is not None else project.path
    if target is None:
        raise ProjectError("project has no path to save to")
    jsonio.dump_file(target, project_to_json(project))


# -- viewer wire format --------------------------------------------------------------

def build_wire(project: Project, rendered: RenderedDocument | None = None) -> dict:
    if rendered is None:
        rendered = project.render()
    return {
        "formatVersion": FORMAT_VERSION,
        "text": rendered.text,
        "fragments": [
            {"id": f.id, "start": f.start, "end": f.end, "text": f.text,
             "cells": [{"dataset": c.dataset, "row": c.row, "field": c.field}
                       for c in sorted(f.cells)]}
            for f in rendered.fragments
        ],
        "groups": [list(g) for g in rendered.groups],
        "datasets": {name: rows for name, rows in project.datasets.items()},
    }


def provenance_response(project: Project, fragment_id: int,
                        rendered: RenderedDocument | None = None) -> dict | None:
    if rendered is None:
        rendered = project.render()
    target = next((f for f in rendered.fragments if f.id == fragment_id), None)
    if target is None:
        return None
    linked = sorted({other for pair in rendered.groups if fragment_id in pair
                     for other in pair if other != fragment_id})
    return {
        "fragmentId": fragment_id,
        "cells": [{"dataset": c.dataset, "row": c.row, "field": c.field}
                  for c in sorted(target.cells)],
        "linkedFragments": linked,
    }
