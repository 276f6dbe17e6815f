"""Runtime values, environments, dataset loading.

Every value carries an *own* provenance set of cell addresses; containers
additionally expose an effective provenance that folds in their components.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from decimal import Decimal
from typing import Callable

from ..errors import DatasetError, EvalError, SourceSpan
from ..lang.ast import Clause, Expr

EMPTY_PROV: frozenset["CellAddress"] = frozenset()


@dataclass(frozen=True, order=True)
class CellAddress:
    dataset: str
    row: int
    field: str

    def __str__(self) -> str:
        return f"{self.dataset}[{self.row}].{self.field}"


@dataclass(frozen=True)
class Value:
    prov: frozenset[CellAddress] = EMPTY_PROV

    def effective_prov(self) -> frozenset[CellAddress]:
        return self.prov

    def with_extra_prov(self, extra: frozenset[CellAddress]) -> "Value":
        if not extra:
            return self
        return replace(self, prov=self.prov | extra)


@dataclass(frozen=True)
class NumV(Value):
    value: Decimal = Decimal(0)


@dataclass(frozen=True)
class StrV(Value):
    value: str = ""


@dataclass(frozen=True)
class BoolV(Value):
    value: bool = False


@dataclass(frozen=True)
class OrderingV(Value):
    name: str = "EQ"  # LT | EQ | GT


@dataclass(frozen=True)
class RecordV(Value):
    fields: tuple[tuple[str, Value], ...] = ()

    def get(self, name: str) -> Value | None:
        for k, v in self.fields:
            if k == name:
                return v
        return None

    def effective_prov(self) -> frozenset[CellAddress]:
        out = self.prov
        for _, v in self.fields:
            out |= v.effective_prov()
        return out


@dataclass(frozen=True)
class ListV(Value):
    elements: tuple[Value, ...] = ()

    def effective_prov(self) -> frozenset[CellAddress]:
        out = self.prov
        for v in self.elements:
            out |= v.effective_prov()
        return out


@dataclass(frozen=True)
class ClosureV(Value):
    params: tuple[str, ...] = ()
    body: Expr | None = None
    env: "Env | None" = field(default=None, compare=False)


@dataclass(frozen=True)
class ClauseClosureV(Value):
    name: str = ""
    clauses: tuple[Clause, ...] = ()
    env: "Env | None" = field(default=None, compare=False)
    collected: tuple[Value, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.clauses[0].patterns)


@dataclass(frozen=True)
class BuiltinV(Value):
    name: str = ""
    arity: int = 1
    fn: Callable | None = field(default=None, compare=False)
    collected: tuple[Value, ...] = ()


def show(v: Value) -> str:
    """Short rendering for error messages."""
    match v:
        case NumV(value=n):
            from ..lang.pretty import format_decimal
            return format_decimal(n)
        case StrV(value=s):
            return repr(s)
        case BoolV(value=b):
            return "true" if b else "false"
        case OrderingV(name=n):
            return n
        case RecordV(fields=fs):
            return "{ " + ", ".join(f"{k}: {show(x)}" for k, x in fs) + " }"
        case ListV(elements=es):
            return "[" + ", ".join(show(x) for x in es) + "]"
        case ClosureV() | ClauseClosureV() | BuiltinV():
            return "<function>"
    return repr(v)


def kind_name(v: Value) -> str:
    return {
        NumV: "number", StrV: "string", BoolV: "boolean", OrderingV: "ordering",
        RecordV: "record", ListV: "list", ClosureV: "function",
        ClauseClosureV: "function", BuiltinV: "function",
    }[type(v)]


class Env:
    """Chained mutable scopes; the global frame is shared so prelude helpers
    may reference datasets bound after their definition."""

    __slots__ = ("parent", "frame")

    def __init__(self, parent: "Env | None" = None):
        self.parent = parent
        self.frame: dict[str, Value] = {}

    def define(self, name: str, value: Value) -> None:
        self.frame[name] = value

    def lookup(self, name: str, span: SourceSpan | None = None) -> Value:
        env: Env | None = self
        while env is not None:
            if name in env.frame:
                return env.frame[name]
            env = env.parent
        raise EvalError("UnboundVariable", f"unbound variable {name!r}", span)

    def child(self) -> "Env":
        return Env(self)

    def names(self) -> set[str]:
        out: set[str] = set()
        env: Env | None = self
        while env is not None:
            out |= env.frame.keys()
            env = env.parent
        return out


def _cell_value(raw: object, addr: CellAddress) -> Value:
    prov = frozenset({addr})
    if isinstance(raw, bool) or raw is None:
        raise DatasetError(f"cell {addr} is not a text or number value: {raw!r}")
    if isinstance(raw, Decimal):
        return NumV(prov, raw)
    if isinstance(raw, int):
        return NumV(prov, Decimal(raw))
    if isinstance(raw, float):
        return NumV(prov, Decimal(repr(raw)))
    if isinstance(raw, str):
        return StrV(prov, raw)
    raise DatasetError(f"cell {addr} is not a text or number value: {raw!r}")


def load_dataset(name: str, rows: list[dict]) -> ListV:
    """Build a list of records whose leaves carry singleton cell addresses.

    Rows must share one key set; cells must be scalars.
    """
    if not rows:
        return ListV(EMPTY_PROV, ())
    keys = list(rows[0].keys())
    key_set = set(keys)
    records = []
    for i, row in enumerate(rows):
        if set(row.keys()) != key_set:
            raise DatasetError(
                f"dataset {name!r} row {i} keys {sorted(row.keys())} do not match "
                f"row 0 keys {sorted(key_set)}")
        fields = tuple(
            (k, _cell_value(row[k], CellAddress(name, i, k))) for k in keys)
        records.append(RecordV(EMPTY_PROV, fields))
    return ListV(EMPTY_PROV, tuple(records))
