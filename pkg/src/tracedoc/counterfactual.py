"""Robustness harness: mutate datasets, re-execute gold and candidate
expressions, and compare behavior.

Outputs are compared exactly as the synthesis loop compares them: on coerced
strings. When both expressions error, a MatchGold case passes only if the
error kinds agree; under an expect-string expectation a double error is its
own verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EvalError, ProjectError
from .eval.interp import coerce_to_string, evaluate
from .eval.prelude import define_defs, prelude
from .eval.values import Env, load_dataset
from .lang.ast import (
    App, BinOp, Expr, FieldAccess, InterpString, Var,
)
from .lang.parser import parse_expr

CATEGORIES = frozenset({
    "data_retrieval", "ratio", "average", "min_max", "rank", "sum",
    "comparison", "generalised_quantifiers",
})

SUCCEEDED_DESPITE_ERROR_DEFINITION = (
    "A case succeeded despite error when at least one of its two executions "
    "(gold, candidate) raised an evaluation error on the mutated data but the "
    "final expectation check still passed.")


# -- cases -------------------------------------------------------------------

@dataclass(frozen=True)
class Mutation:
    op: str  # set | insert | delete
    dataset: str | None = None
    where: tuple[tuple[str, object], ...] = ()
    field_name: str | None = None
    value: object = None
    row: tuple[tuple[str, object], ...] = ()

    @staticmethod
    def from_json(obj: dict) -> "Mutation":
        op = obj.get("op")
        if op not in ("set", "insert", "delete"):
            raise ProjectError(f"unknown mutation op {op!r}")
        return Mutation(
            op=op,
            dataset=obj.get("dataset"),
            where=tuple(sorted(obj.get("where", {}).items())),
            field_name=obj.get("field"),
            value=obj.get("value"),
            row=tuple(obj.get("row", {}).items()),
        )

    def to_json(self) -> dict:
        out: dict = {"op": self.op}
        if self.dataset:
            out["dataset"] = self.dataset
        if self.where:
            out["where"] = dict(self.where)
        if self.field_name is not None:
            out["field"] = self.field_name
        if self.value is not None:
            out["value"] = self.value
        if self.row:
            out["row"] = dict(self.row)
        return out


@dataclass(frozen=True)
class Expectation:
    kind: str  # match_gold | expect_string
    value: str | None = None

    @staticmethod
    def from_json(obj: dict) -> "Expectation":
        kind = obj.get("kind")
        if kind == "match_gold":
            return Expectation("match_gold")
        if kind == "expect_string":
            if not isinstance(obj.get("value"), str):
                raise ProjectError("expect_string expectation requires a string value")
            return Expectation("expect_string", obj["value"])
        raise ProjectError(f"unknown expectation kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "match_gold":
            return {"kind": "match_gold"}
        return {"kind": "expect_string", "value": self.value}


@dataclass(frozen=True)
class CounterfactualCase:
    id: str
    category: str
    complexity: int
    gold: Expr
    gold_source: str
    candidate: Expr
    candidate_source: str
    mutations: tuple[Mutation, ...]
    expectation: Expectation

    @staticmethod
    def from_json(obj: dict) -> "CounterfactualCase":
        category = obj.get("category")
        if category not in CATEGORIES:
            raise ProjectError(f"case {obj.get('id')!r}: unknown category {category!r}")
        gold_source = obj["gold"]
        gold = parse_expr(gold_source)
        candidate_source = obj.get("candidate", gold_source)
        mutations = tuple(Mutation.from_json(m) for m in obj.get("mutations", ()))
        if not mutations:
            raise ProjectError(f"case {obj.get('id')!r}: at least one mutation required")
        complexity = obj.get("complexity", compute_complexity(gold))
        if complexity < 1:
            raise ProjectError(f"case {obj.get('id')!r}: complexity must be >= 1")
        return CounterfactualCase(
            id=str(obj["id"]),
            category=category,
            complexity=int(complexity),
            gold=gold,
            gold_source=gold_source,
            candidate=parse_expr(candidate_source),
            candidate_source=candidate_source,
            mutations=mutations,
            expectation=Expectation.from_json(obj["expectation"]),
        )


# -- complexity metric ---------------------------------------------------------

_KIND_OF_CALL = {
    "findWithKey_": "retrieval", "model_": "retrieval", "getByYear": "retrieval",
    "getByCategory": "retrieval", "head": "retrieval", "filter": "retrieval",
    "sum": "aggregation", "length": "aggregation", "maximumBy": "aggregation",
    "minimumBy": "aggregation", "overallComparison": "aggregation",
    "compare": "comparison", "trendWord": "comparison", "compareCols": "comparison",
    "findIndex": "ranking", "sort": "ranking", "sortBy": "ranking",
    "rankLabel": "ranking", "ordinal": "ranking",
    "numToStr": "formatting", "formatNum": "formatting",
}


def _walk(e: Expr):
    yield e
    for name in getattr(e, "__dataclass_fields__", {}):
        child = getattr(e, name)
        if isinstance(child, Expr):
            yield from _walk(child)
        elif isinstance(child, tuple):
            for item in child:
                if isinstance(item, Expr):
                    yield from _walk(item)
                elif isinstance(item, tuple):
                    for sub in item:
                        if isinstance(sub, Expr):
                            yield from _walk(sub)
                elif hasattr(item, "body"):  # Clause, Binding, Generator
                    for sub_name in item.__dataclass_fields__:
                        sub = getattr(item, sub_name)
                        if isinstance(sub, Expr):
                            yield from _walk(sub)


def compute_complexity(gold: Expr) -> int:
    """Distinct query sub-expression kinds present in the tree."""
    kinds: set[str] = set()
    for node in _walk(gold):
        match node:
            case App(fn=Var(name=n)) if n in _KIND_OF_CALL:
                kinds.add(_KIND_OF_CALL[n])
            case Var(name=n) if n in _KIND_OF_CALL:
                kinds.add(_KIND_OF_CALL[n])
            case FieldAccess():
                kinds.add("retrieval")
            case BinOp(op=op):
                if op in ("+", "-", "*", "/"):
                    kinds.add("arithmetic")
                elif op in ("==", "<=", "<", ">", ">="):
                    kinds.add("comparison")
                elif op == "++":
                    kinds.add("formatting")
            case InterpString():
                kinds.add("formatting")
    return max(1, len(kinds))


# -- mutation application --------------------------------------------------------

def _match(row: dict, where) -> bool:
    for key, wanted in where:
        if key not in row:
            raise ProjectError(f"selector references unknown field {key!r}")
        if row[key] != wanted:
            return False
    return True


def apply_mutations(rows: list[dict], mutations) -> list[dict]:
    """Apply mutations in order; the input rows are never touched."""
    out = [dict(r) for r in rows]
    for m in mutations:
        if m.op == "set":
            matched = [r for r in out if _match(r, m.where)]
            if not matched:
                raise ProjectError(f"selector {dict(m.where)} matched no rows")
            for r in matched:
                if m.field_name not in r:
                    raise ProjectError(f"unknown field {m.field_name!r}")
                r[m.field_name] = m.value
        elif m.op == "delete":
            keep = [r for r in out if not _match(r, m.where)]
            if len(keep) == len(out):
                raise ProjectError(f"selector {dict(m.where)} matched no rows")
            out = keep
        elif m.op == "insert":
            row = dict(m.row)
            if out and set(row.keys()) != set(out[0].keys()):
                raise ProjectError(
                    f"inserted row keys {sorted(row)} do not match table keys "
                    f"{sorted(out[0].keys())}")
            out.append(row)
        else:
            raise ProjectError(f"unknown mutation op {m.op!r}")
    return out


# -- execution -------------------------------------------------------------------

@dataclass(frozen=True)
class Output:
    """One expression execution: a coerced string or an error."""

    is_error: bool
    text: str            # coerced string, or the error message
    error_kind: str | None = None

    def to_json(self) -> dict:
        if self.is_error:
            return {"kind": "error", "error_kind": self.error_kind, "message": self.text}
        return {"kind": "string", "text": self.text}


@dataclass(frozen=True)
class CaseVerdict:
    id: str
    gold_output: Output
    candidate_output: Output
    verdict: str  # Pass | CounterfactualError | BothError

    @property
    def error_count(self) -> int:
        return int(self.gold_output.is_error) + int(self.candidate_output.is_error)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "gold": self.gold_output.to_json(),
            "candidate": self.candidate_output.to_json(),
            "verdict": self.verdict,
        }


def _execute(expr: Expr, env: Env) -> Output:
    try:
        text, _ = coerce_to_string(evaluate(expr, env))
        return Output(False, text)
    except EvalError as err:
        return Output(True, err.message, err.kind)


def _mutated_env(case: CounterfactualCase, base_datasets: dict[str, list[dict]],
                 imports, code: str) -> Env:
    default_name = next(iter(base_datasets)) if len(base_datasets) == 1 else None
    mutated = {name: list(rows) for name, rows in base_datasets.items()}
    for m in case.mutations:
        name = m.dataset or default_name
        if name not in mutated:
            raise ProjectError(f"mutation references unknown dataset {name!r}")
        mutated[name] = apply_mutations(mutated[name], [m])
    env = prelude()
    for name, rows in mutated.items():
        env.define(name, load_dataset(name, rows))
    for source in imports:
        define_defs(env, source)
    if code:
        define_defs(env, code)
    return env


def run_case(case: CounterfactualCase, base_datasets: dict[str, list[dict]],
             imports=(), code: str = "") -> CaseVerdict:
    env = _mutated_env(case, base_datasets, imports, code)
    gold_out = _execute(case.gold, env)
    candidate_out = _execute(case.candidate, env)

    if case.expectation.kind == "match_gold":
        if gold_out.is_error and candidate_out.is_error:
            verdict = "Pass" if gold_out.error_kind == candidate_out.error_kind else "BothError"
        elif gold_out.is_error or candidate_out.is_error:
            verdict = "CounterfactualError"
        else:
            verdict = "Pass" if candidate_out.text == gold_out.text else "CounterfactualError"
    else:
        expected = case.expectation.value
        if gold_out.is_error and candidate_out.is_error:
            verdict = "BothError"
        elif not candidate_out.is_error and candidate_out.text == expected:
            verdict = "Pass"
        else:
            verdict = "CounterfactualError"
    return CaseVerdict(case.id, gold_out, candidate_out, verdict)


# -- suites ------------------------------------------------------------------------

@dataclass(frozen=True)
class Suite:
    cases: tuple[CounterfactualCase, ...]

    @staticmethod
    def from_json(obj: dict) -> "Suite":
        return Suite(tuple(CounterfactualCase.from_json(c) for c in obj.get("cases", ())))


@dataclass
class SuiteReport:
    header: dict = field(default_factory=dict)
    verdicts: list[CaseVerdict] = field(default_factory=list)
    cases: list[CounterfactualCase] = field(default_factory=list)

    @property
    def totals(self) -> dict:
        counts = [v.error_count for v in self.verdicts]
        with_error = [c for c in counts if c > 0]
        succeeded_despite = sum(
            1 for v in self.verdicts if v.error_count > 0 and v.verdict == "Pass")
        return {
            "executions": 2 * len(self.verdicts),
            "cases": len(self.verdicts),
            "cases_with_error": len(with_error),
            "errors_per_case_mean": (sum(with_error) / len(with_error)) if with_error else 0.0,
            "succeeded_despite_error": succeeded_despite,
            "counterfactual_errors": sum(
                1 for v in self.verdicts if v.verdict == "CounterfactualError"),
        }

    def _rates(self, key_of) -> dict:
        buckets: dict = {}
        for case, verdict in zip(self.cases, self.verdicts):
            bucket = buckets.setdefault(key_of(case), [0, 0])
            bucket[1] += 1
            if verdict.verdict == "Pass":
                bucket[0] += 1
        return {k: passed / total for k, (passed, total) in sorted(buckets.items())}

    @property
    def success_by_category(self) -> dict:
        return self._rates(lambda c: c.category)

    @property
    def success_by_complexity(self) -> dict:
        return self._rates(lambda c: c.complexity)

    def to_json(self) -> dict:
        return {
            "header": self.header,
            "verdicts": [v.to_json() for v in self.verdicts],
            "totals": self.totals,
            "success_by_category": self.success_by_category,
            "success_by_complexity": {
                str(k): v for k, v in self.success_by_complexity.items()},
        }


def validate_suite(suite: Suite, base_datasets: dict[str, list[dict]],
                   imports=(), code: str = "") -> list[str]:
    """Gold self-consistency: every gold evaluates cleanly on the base data."""
    problems = []
    env = prelude()
    for name, rows in base_datasets.items():
        env.define(name, load_dataset(name, rows))
    for source in imports:
        define_defs(env, source)
    if code:
        define_defs(env, code)
    for case in suite.cases:
        out = _execute(case.gold, env)
        if out.is_error:
            problems.append(
                f"case {case.id}: gold fails on base data: {out.error_kind}: {out.text}")
    return problems


def run_suite(suite: Suite, base_datasets: dict[str, list[dict]],
              imports=(), code: str = "") -> SuiteReport:
    problems = validate_suite(suite, base_datasets, imports, code)
    if problems:
        raise ProjectError("suite failed gold self-consistency:\n" + "\n".join(problems))
    report = SuiteReport(header={
        "succeeded_despite_error_definition": SUCCEEDED_DESPITE_ERROR_DEFINITION,
    })
    for case in suite.cases:
        report.cases.append(case)
        report.verdicts.append(run_case(case, base_datasets, imports, code))
    return report


def format_report(report: SuiteReport) -> str:
    lines = ["counterfactual suite report", ""]
    for case, verdict in zip(report.cases, report.verdicts):
        lines.append(
            f"  [{verdict.verdict:<19}] {case.id} ({case.category}, "
            f"complexity {case.complexity})")
        if verdict.verdict != "Pass":
            lines.append(f"      gold:      {verdict.gold_output.to_json()}")
            lines.append(f"      candidate: {verdict.candidate_output.to_json()}")
    totals = report.totals
    lines += [
        "",
        f"  executions:              {totals['executions']}",
        f"  cases with error:        {totals['cases_with_error']}",
        f"  errors per case (mean):  {totals['errors_per_case_mean']:.2f}",
        f"  succeeded despite error: {totals['succeeded_despite_error']}",
        f"  counterfactual errors:   {totals['counterfactual_errors']}",
        "",
        "  success by category:   " + ", ".join(
            f"{k}={v:.0%}" for k, v in report.success_by_category.items()),
        "  success by complexity: " + ", ".join(
            f"{k}={v:.0%}" for k, v in report.success_by_complexity.items()),
    ]
    return "\n".join(lines)
