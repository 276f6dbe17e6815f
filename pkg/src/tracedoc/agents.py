"""The two authoring agents.

The suggestion agent annotates computable fragments with REPLACE tags and is
repaired against the original paragraph, so its output always strips back to
the input byte-for-byte. The interpretation agent runs the closed synthesis
loop: complete, parse, evaluate, coerce, compare, and feed any failure back
into the conversation verbatim until the budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from . import jsonio
from .docmodel import (
    Document, TargetFragment, build_env, doc_source, parse_replace_tags,
    reinsert_tags,
)
from .errors import EvalError, GatewayError, ParseError, TracedocError
from .eval.interp import coerce_to_string, evaluate
from .eval.prelude import define_defs, prelude
from .eval.values import Env, load_dataset
from .gateway import ChatMessage, CompletionRequest, Gateway, strip_fences
from .lang.ast import Expr
from .lang.parser import parse_expr
from .lang.pretty import pretty

DEFAULT_MAX_RETRIES = 5
TRANSPORT_BUDGET = 3

_TAG_OPEN = "[REPLACE"


def _prompt_text(name: str) -> str:
    return resources.files("tracedoc").joinpath(f"prompts/{name}").read_text(encoding="utf-8")


def interpretation_system_prompt() -> str:
    return _prompt_text("interpretation_system.txt")


def suggestion_system_prompt() -> str:
    return _prompt_text("suggestion_system.txt")


# -- tasks and outcomes -------------------------------------------------------

@dataclass(frozen=True)
class SynthesisTask:
    datasets: dict[str, list[dict]]
    imports: tuple[str, ...]
    code: str
    paragraph: str  # contains exactly one [REPLACE ...] tag
    paragraph_value: str | None = None
    share_target: bool = True

    def __post_init__(self) -> None:
        count = self.paragraph.count(_TAG_OPEN)
        if count != 1:
            raise TracedocError(
                f"synthesis task paragraph must contain exactly one REPLACE tag, found {count}")
        if self.share_target:
            self.target()  # must be extractable

    def target(self) -> str:
        """The string s the synthesized expression must render."""
        bare = "[REPLACE]"
        if bare not in self.paragraph:
            _, frags = parse_replace_tags(self.paragraph)
            return frags[0].text
        if self.paragraph_value is None:
            raise TracedocError("cannot determine target: tag has no value and "
                                "no ground-truth paragraph was provided")
        start = self.paragraph.index(bare)
        end = start + len(bare)
        prefix = self.paragraph[:start]
        suffix = self.paragraph[end:]
        if not (self.paragraph_value.startswith(prefix)
                and self.paragraph_value.endswith(suffix)
                and len(self.paragraph_value) >= len(prefix) + len(suffix)):
            raise TracedocError("ground-truth paragraph does not align with the tagged paragraph")
        return self.paragraph_value[len(prefix):len(self.paragraph_value) - len(suffix)]

    def environment(self) -> Env:
        env = prelude()
        for name, rows in self.datasets.items():
            env.define(name, load_dataset(name, rows))
        for source in self.imports:
            define_defs(env, source)
        if self.code:
            define_defs(env, self.code)
        return env


def task_for_fragment(doc: Document, frag: TargetFragment,
                      share_target: bool = True,
                      paragraph_value: str | None = None) -> SynthesisTask:
    return SynthesisTask(
        datasets=doc.dataset_rows(),
        imports=doc.imports,
        code=doc.code,
        paragraph=doc_source(doc, tagged=frag, include_value=share_target),
        paragraph_value=paragraph_value,
        share_target=share_target,
    )


@dataclass(frozen=True)
class Success:
    expr: Expr
    attempts: int


@dataclass(frozen=True)
class FailNoExpression:
    last_error: str
    attempts: int


@dataclass(frozen=True)
class Mismatch:
    expr: Expr
    s_prime: str
    attempts: int


SynthesisOutcome = Success | FailNoExpression | Mismatch


# -- interpretation agent -----------------------------------------------------

def build_interpretation_prompt(task: SynthesisTask) -> tuple[ChatMessage, ...]:
    payload = {
        "datasets": task.datasets,
        "imports": list(task.imports),
        "code": task.code,
        "paragraph": task.paragraph,
    }
    if task.paragraph_value is not None:
        payload["paragraphValue"] = task.paragraph_value
    return (
        ChatMessage("system", interpretation_system_prompt()),
        ChatMessage("user", jsonio.dumps(payload)),
    )


def _complete_with_transport_retry(gateway: Gateway, request: CompletionRequest) -> str:
    last: GatewayError | None = None
    for _ in range(TRANSPORT_BUDGET):
        try:
            return gateway.complete(request)
        except GatewayError as err:
            last = err
    raise last


def synthesize(task: SynthesisTask, gateway: Gateway,
               max_retries: int = DEFAULT_MAX_RETRIES,
               model_name: str = "default") -> SynthesisOutcome:
    """Error-guided synthesis loop; the conversation accretes across retries."""
    assert max_retries >= 1
    target = task.target()
    env = task.environment()
    messages = list(build_interpretation_prompt(task))

    attempts = 0
    last_error = "no attempt made"
    clean_result: tuple[Expr, str] | None = None
    while attempts < max_retries:
        request = CompletionRequest(tuple(messages), model_name=model_name,
                                    max_retries_hint=max_retries - attempts)
        response = _complete_with_transport_retry(gateway, request)
        attempts += 1
        source = strip_fences(response)
        expr: Expr | None = None
        feedback: str
        try:
            expr = parse_expr(source)
            value = evaluate(expr, env)
            text, _ = coerce_to_string(value)
        except (ParseError, EvalError) as err:
            feedback = str(err)
            last_error = feedback
            clean_result = None
        else:
            if text == target:
                _revalidate(expr, task, target)
                return Success(expr, attempts)
            feedback = (f'The expression evaluated to "{text}" but the target '
                        f'fragment is "{target}".')
            clean_result = (expr, text)
        messages.append(ChatMessage("assistant", response))
        messages.append(ChatMessage("user", feedback))
    if clean_result is not None:
        expr, s_prime = clean_result
        return Mismatch(expr, s_prime, attempts)
    return FailNoExpression(last_error, attempts)


def _revalidate(expr: Expr, task: SynthesisTask, target: str) -> None:
    """Success must be independently reproducible from the printed expression."""
    text, _ = coerce_to_string(evaluate(parse_expr(pretty(expr)), task.environment()))
    if text != target:
        raise TracedocError(
            f"synthesis validation is not reproducible: {text!r} != {target!r}")


# -- suggestion agent ---------------------------------------------------------

@dataclass(frozen=True)
class SuggestionResult:
    annotated_paragraph: str
    fragments: tuple[TargetFragment, ...]
    warnings: tuple[str, ...] = field(default=())


def _extract_tag_values(response: str) -> tuple[list[str], list[str]]:
    """All REPLACE tag values in the model output, with repair warnings."""
    from .docmodel import _parse_tag  # tolerant reuse of the tag grammar
    values: list[str] = []
    warnings: list[str] = []
    pos = 0
    while True:
        at = response.find(_TAG_OPEN, pos)
        if at == -1:
            return values, warnings
        try:
            value, end = _parse_tag(response, at)
        except TracedocError as err:
            warnings.append(f"dropped malformed tag at offset {at}: {err}")
            pos = at + len(_TAG_OPEN)
            continue
        values.append(value)
        pos = end


def _data_section(datasets: dict[str, list[dict]]) -> str:
    if len(datasets) == 1:
        (rows,) = datasets.values()
        return jsonio.dumps(rows)
    return "\n".join(f"{name}:\n{jsonio.dumps(rows)}" for name, rows in datasets.items())


def suggest(paragraph: str, datasets: dict[str, list[dict]],
            gateway: Gateway, model_name: str = "default") -> SuggestionResult:
    """Ask for computable fragments; repair the annotation onto the input.

    Tag values that are not findable, in order, as substrings of the original
    paragraph are dropped with a warning, so stripping the returned annotation
    always reproduces the input exactly.
    """
    if not paragraph:
        raise TracedocError("empty paragraph")
    request = CompletionRequest((
        ChatMessage("system", suggestion_system_prompt()),
        ChatMessage("user", f"Paragraph:\n{paragraph}\n\nData:\n{_data_section(datasets)}"),
    ), model_name=model_name)
    response = gateway.complete(request)
    values, warnings = _extract_tag_values(response)

    fragments: list[TargetFragment] = []
    cursor = 0
    for value in values:
        found = paragraph.find(value, cursor)
        if found == -1:
            warnings.append(
                f"dropped tag whose value {value!r} is not a paragraph substring")
            continue
        fragments.append(TargetFragment(found, found + len(value), value))
        cursor = found + len(value)
    annotated = reinsert_tags(paragraph, fragments)
    clean, _ = parse_replace_tags(annotated)
    assert clean == paragraph
    return SuggestionResult(annotated, tuple(fragments), tuple(warnings))
