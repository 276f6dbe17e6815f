"""Syntax trees for the expression language.

Every node carries a source span; spans are excluded from equality so that
round-tripped trees compare structurally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal

from ..errors import SourceSpan

_NO_SPAN = SourceSpan(0, 0)


def _SPAN():  # noqa: N802 - used as a field factory in node definitions
    return field(default=_NO_SPAN, compare=False, repr=False)


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class NumLit(Expr):
    value: Decimal
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class StrLit(Expr):
    value: str
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class OrderingLit(Expr):
    """One of LT, EQ, GT."""

    name: str
    span: SourceSpan = _SPAN()

    def __post_init__(self) -> None:
        assert self.name in ("LT", "EQ", "GT"), self.name


@dataclass(frozen=True)
class Var(Expr):
    name: str
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class Lambda(Expr):
    params: tuple[str, ...]
    body: Expr
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    args: tuple[Expr, ...]
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class Binding:
    """One `name params = value` binding inside a let."""

    name: str
    params: tuple[str, ...]
    value: Expr


@dataclass(frozen=True)
class Let(Expr):
    bindings: tuple[Binding, ...]
    body: Expr
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class Pattern:
    """Clause pattern: a variable binder or an ordering constructor."""

    kind: str  # "var" | "ordering"
    name: str

    def __post_init__(self) -> None:
        assert self.kind in ("var", "ordering")
        if self.kind == "ordering":
            assert self.name in ("LT", "EQ", "GT"), self.name


@dataclass(frozen=True)
class Clause:
    patterns: tuple[Pattern, ...]
    body: Expr


@dataclass(frozen=True)
class ClauseFun(Expr):
    """Function defined by pattern-matching clauses; all clauses share arity."""

    name: str
    clauses: tuple[Clause, ...]
    span: SourceSpan = _SPAN()

    def __post_init__(self) -> None:
        arities = {len(c.patterns) for c in self.clauses}
        assert len(arities) == 1, f"mixed clause arity for {self.name}"

    @property
    def arity(self) -> int:
        return len(self.clauses[0].patterns)


@dataclass(frozen=True)
class Record(Expr):
    fields: tuple[tuple[str, Expr], ...]
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class FieldAccess(Expr):
    subject: Expr
    field_name: str
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class ListLit(Expr):
    elements: tuple[Expr, ...]
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class Generator:
    """`var <- source` qualifier of a comprehension."""

    var: str
    source: Expr


@dataclass(frozen=True)
class ListComp(Expr):
    head: Expr
    generators: tuple[Generator, ...]
    guards: tuple[Expr, ...]
    span: SourceSpan = _SPAN()


@dataclass(frozen=True)
class If(Expr):
    cond: Expr
    then: Expr
    orelse: Expr
    span: SourceSpan = _SPAN()


BINOPS = ("+", "-", "*", "/", "==", "<=", "<", ">", ">=", "++", "and", "or")


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    lhs: Expr
    rhs: Expr
    span: SourceSpan = _SPAN()

    def __post_init__(self) -> None:
        assert self.op in BINOPS, self.op


@dataclass(frozen=True)
class InterpString(Expr):
    """Alternating literal text and expression segments; text entries are str."""

    segments: tuple[object, ...]  # str | Expr
    span: SourceSpan = _SPAN()

    def __post_init__(self) -> None:
        assert len(self.segments) >= 1


@dataclass(frozen=True)
class Definition:
    """Top-level `let` definition: a plain value, a function, or a ClauseFun."""

    name: str
    expr: Expr
    span: SourceSpan = _SPAN()


def free_vars(e: Expr, bound: frozenset[str] = frozenset()) -> set[str]:
    """Names referenced by `e` that are not bound within it."""
    match e:
        case Var(name=n):
            return set() if n in bound else {n}
        case NumLit() | StrLit() | BoolLit() | OrderingLit():
            return set()
        case Lambda(params=ps, body=b):
            return free_vars(b, bound | frozenset(ps))
        case App(fn=f, args=args):
            out = free_vars(f, bound)
            for a in args:
                out |= free_vars(a, bound)
            return out
        case Let(bindings=bs, body=body):
            out: set[str] = set()
            inner = bound
            for b in bs:
                out |= free_vars(b.value, inner | frozenset(b.params))
                inner = inner | {b.name}
            return out | free_vars(body, inner)
        case ClauseFun(name=n, clauses=cs):
            out = set()
            for c in cs:
                binders = {p.name for p in c.patterns if p.kind == "var"}
                out |= free_vars(c.body, bound | binders | {n})
            return out
        case Record(fields=fs):
            out = set()
            for _, v in fs:
                out |= free_vars(v, bound)
            return out
        case FieldAccess(subject=s):
            return free_vars(s, bound)
        case ListLit(elements=es):
            out = set()
            for el in es:
                out |= free_vars(el, bound)
            return out
        case ListComp(head=h, generators=gens, guards=guards):
            out = set()
            inner = bound
            for g in gens:
                out |= free_vars(g.source, inner)
                inner = inner | {g.var}
            for g in guards:
                out |= free_vars(g, inner)
            return out | free_vars(h, inner)
        case If(cond=c, then=t, orelse=o):
            return free_vars(c, bound) | free_vars(t, bound) | free_vars(o, bound)
        case BinOp(lhs=l, rhs=r):
            return free_vars(l, bound) | free_vars(r, bound)
        case InterpString(segments=segs):
            out = set()
            for s in segs:
                if isinstance(s, Expr):
                    out |= free_vars(s, bound)
            return out
    raise TypeError(f"unknown expression node {e!r}")
