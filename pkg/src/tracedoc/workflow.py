"""Human-in-the-loop authoring state machine.

Four states: awaiting selection, synthesizing, awaiting validation, mismatch
decision. Any (state, event) pair outside the transition table raises
WorkflowError and leaves the session untouched. The revision history is a
linear chain; the document head moves only on approve or revise-goal.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .agents import FailNoExpression, Mismatch, Success, SynthesisOutcome, SynthesisTask, task_for_fragment
from .docmodel import Document, TargetFragment, _locate, revise_paragraph, splice
from .errors import WorkflowError
from .lang.ast import Expr


@dataclass(frozen=True)
class AwaitingSelection:
    pass


@dataclass(frozen=True)
class Synthesizing:
    frag: TargetFragment
    frag_id: int


@dataclass(frozen=True)
class AwaitingValidation:
    frag: TargetFragment
    frag_id: int
    expr: Expr
    tentative: Document


@dataclass(frozen=True)
class MismatchDecision:
    frag: TargetFragment
    frag_id: int
    expr: Expr
    s_prime: str


SessionState = AwaitingSelection | Synthesizing | AwaitingValidation | MismatchDecision

EVENTS = ("select", "outcome", "approve", "reject", "revise_goal")

ALLOWED_EVENTS: dict[type, frozenset[str]] = {
    AwaitingSelection: frozenset({"select"}),
    Synthesizing: frozenset({"outcome"}),
    AwaitingValidation: frozenset({"approve", "reject"}),
    MismatchDecision: frozenset({"reject", "revise_goal"}),
}


def state_name(state: SessionState) -> str:
    return {
        AwaitingSelection: "awaiting_selection",
        Synthesizing: "synthesizing",
        AwaitingValidation: "awaiting_validation",
        MismatchDecision: "mismatch_decision",
    }[type(state)]


@dataclass(frozen=True)
class Revision:
    document: Document
    parent: int | None
    action: str  # init | approve | revise_goal
    timestamp: float


@dataclass
class Session:
    revisions: list[Revision] = field(default_factory=list)
    state: SessionState = field(default_factory=AwaitingSelection)

    @staticmethod
    def start(document: Document) -> "Session":
        return Session([Revision(document, None, "init", time.time())])

    @property
    def head(self) -> Document:
        return self.revisions[-1].document

    def _require(self, event: str) -> None:
        if event not in ALLOWED_EVENTS[type(self.state)]:
            raise WorkflowError(
                f"event {event!r} not allowed in state {state_name(self.state)}")

    # -- transitions --------------------------------------------------------

    def select_fragment(self, frag: TargetFragment, frag_id: int,
                        share_target: bool = True,
                        paragraph_value: str | None = None) -> SynthesisTask:
        """Enter Synthesizing and return the synthesis task to dispatch.

        Raises WorkflowError in the wrong state, DocumentError for an invalid
        span; the session is unchanged either way.
        """
        self._require("select")
        _locate(self.head, frag)
        task = task_for_fragment(self.head, frag, share_target, paragraph_value)
        self.state = Synthesizing(frag, frag_id)
        return task

    def on_outcome(self, outcome: SynthesisOutcome) -> None:
        self._require("outcome")
        assert isinstance(self.state, Synthesizing)
        frag, frag_id = self.state.frag, self.state.frag_id
        if isinstance(outcome, Success):
            tentative = splice(self.head, frag, outcome.expr, frag_id)
            self.state = AwaitingValidation(frag, frag_id, outcome.expr, tentative)
        elif isinstance(outcome, FailNoExpression):
            self.state = AwaitingSelection()
        elif isinstance(outcome, Mismatch):
            self.state = MismatchDecision(frag, frag_id, outcome.expr, outcome.s_prime)
        else:
            raise WorkflowError(f"unknown outcome {outcome!r}")

    def approve(self) -> None:
        self._require("approve")
        assert isinstance(self.state, AwaitingValidation)
        self.revisions.append(
            Revision(self.state.tentative, len(self.revisions) - 1, "approve", time.time()))
        self.state = AwaitingSelection()

    def reject(self) -> None:
        self._require("reject")
        self.state = AwaitingSelection()

    def revise_goal(self) -> tuple[TargetFragment, TargetFragment]:
        """Commit the s → s′ text revision, then await validation of the splice.

        Returns (old fragment, revised fragment) so callers can shift any
        persisted spans.
        """
        self._require("revise_goal")
        assert isinstance(self.state, MismatchDecision)
        frag, frag_id = self.state.frag, self.state.frag_id
        expr, s_prime = self.state.expr, self.state.s_prime
        revised_doc = revise_paragraph(self.head, frag, s_prime)
        self.revisions.append(
            Revision(revised_doc, len(self.revisions) - 1, "revise_goal", time.time()))
        new_frag = TargetFragment(frag.start, frag.start + len(s_prime), s_prime)
        tentative = splice(revised_doc, new_frag, expr, frag_id)
        self.state = AwaitingValidation(new_frag, frag_id, expr, tentative)
        return frag, new_frag

    def apply_event(self, event: str, **kwargs):
        """Generic dispatch, used by the exhaustive state/event checks."""
        handler = {
            "select": lambda: self.select_fragment(kwargs["frag"], kwargs["frag_id"]),
            "outcome": lambda: self.on_outcome(kwargs["outcome"]),
            "approve": self.approve,
            "reject": self.reject,
            "revise_goal": self.revise_goal,
        }[event]
        return handler()
