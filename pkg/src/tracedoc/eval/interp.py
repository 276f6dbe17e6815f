"""Expression evaluation with forward value-flow provenance.

Provenance rules: literals are empty; primitive combinations union their
operand provenances; control decisions (if-conditions, filter predicates,
lookup key comparisons, sort keys) contribute nothing — with one exception:
matching a clause argument against an ordering constructor folds the
scrutinee's provenance into the clause result, so trend words keep the cells
they were computed from.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation

from ..errors import EvalError, SourceSpan
from ..lang.ast import (
    App, BinOp, BoolLit, ClauseFun, Expr, FieldAccess, If, InterpString,
    Lambda, Let, ListComp, ListLit, NumLit, OrderingLit, Record, StrLit, Var,
)
from ..lang.pretty import format_decimal
from .values import (
    EMPTY_PROV, BoolV, BuiltinV, ClauseClosureV, ClosureV, Env, ListV, NumV,
    OrderingV, RecordV, StrV, Value, kind_name, show,
)

_SCALARS = (NumV, StrV, BoolV, OrderingV)


def num_to_str(n: Decimal) -> str:
    """Shortest plain-decimal rendering; integers carry no decimal point."""
    return format_decimal(n)


def format_num(n: Decimal, places: int) -> str:
    """Fixed-decimal rendering with `places` digits, rounding half away up."""
    if places < 0:
        raise ValueError("places must be >= 0")
    quantum = Decimal(1).scaleb(-places)
    return str(n.quantize(quantum, rounding="ROUND_HALF_UP"))


def evaluate(e: Expr, env: Env) -> Value:
    match e:
        case NumLit(value=v):
            return NumV(EMPTY_PROV, v)
        case StrLit(value=s):
            return StrV(EMPTY_PROV, s)
        case BoolLit(value=b):
            return BoolV(EMPTY_PROV, b)
        case OrderingLit(name=n):
            return OrderingV(EMPTY_PROV, n)
        case Var(name=n, span=span):
            return env.lookup(n, span)
        case Lambda(params=ps, body=body):
            return ClosureV(EMPTY_PROV, ps, body, env)
        case ClauseFun(name=n, clauses=cs):
            return ClauseClosureV(EMPTY_PROV, n, cs, env)
        case App(fn=f, args=args, span=span):
            fv = evaluate(f, env)
            for a in args:
                fv = apply_value(fv, evaluate(a, env), span)
            return fv
        case Let(bindings=bs, body=body):
            scope = env.child()
            for b in bs:
                if b.params:
                    scope.define(b.name, ClosureV(EMPTY_PROV, b.params, b.value, scope))
                else:
                    scope.define(b.name, evaluate(b.value, scope))
            return evaluate(body, scope)
        case Record(fields=fs):
            return RecordV(EMPTY_PROV, tuple((k, evaluate(v, env)) for k, v in fs))
        case FieldAccess(subject=s, field_name=name, span=span):
            subject = evaluate(s, env)
            if not isinstance(subject, RecordV):
                raise EvalError("TypeMismatch",
                                f"field access on {kind_name(subject)} {show(subject)}", span)
            got = subject.get(name)
            if got is None:
                raise EvalError("KeyNotFound", f"record has no field {name!r}", span)
            return got.with_extra_prov(subject.prov)
        case ListLit(elements=es):
            return ListV(EMPTY_PROV, tuple(evaluate(x, env) for x in es))
        case ListComp():
            return ListV(EMPTY_PROV, tuple(_comprehend(e, 0, env.child(), e.span)))
        case If(cond=c, then=t, orelse=o, span=span):
            cond = evaluate(c, env)
            if not isinstance(cond, BoolV):
                raise EvalError("TypeMismatch",
                                f"if-condition is {kind_name(cond)} {show(cond)}", span)
            return evaluate(t if cond.value else o, env)
        case BinOp(op=op, lhs=l, rhs=r, span=span):
            return _binop(op, evaluate(l, env), evaluate(r, env), span)
        case InterpString(segments=segs, span=span):
            parts: list[str] = []
            prov = EMPTY_PROV
            for seg in segs:
                if isinstance(seg, str):
                    parts.append(seg)
                else:
                    text, p = coerce_to_string(evaluate(seg, env))
                    parts.append(text)
                    prov |= p
            return StrV(prov, "".join(parts))
    raise TypeError(f"unknown expression node {e!r}")


def _comprehend(comp, gen_index: int, scope: Env, span: SourceSpan):
    if gen_index == len(comp.generators):
        for g in comp.guards:
            cond = evaluate(g, scope)
            if not isinstance(cond, BoolV):
                raise EvalError("TypeMismatch",
                                f"comprehension guard is {kind_name(cond)}", span)
            if not cond.value:
                return
        yield evaluate(comp.head, scope)
        return
    gen = comp.generators[gen_index]
    source = evaluate(gen.source, scope)
    if not isinstance(source, ListV):
        raise EvalError("TypeMismatch",
                        f"comprehension source is {kind_name(source)}", span)
    for element in source.elements:
        inner = scope.child()
        inner.define(gen.var, element)
        yield from _comprehend(comp, gen_index + 1, inner, span)


def apply_value(fn: Value, arg: Value, span: SourceSpan) -> Value:
    match fn:
        case ClosureV(params=ps, body=body, env=env):
            scope = env.child()
            scope.define(ps[0], arg)
            if len(ps) == 1:
                return evaluate(body, scope)
            return ClosureV(EMPTY_PROV, ps[1:], body, scope)
        case ClauseClosureV(name=name, clauses=cs, env=env, collected=got):
            got = got + (arg,)
            if len(got) < fn.arity:
                return ClauseClosureV(EMPTY_PROV, name, cs, env, got)
            return _dispatch_clauses(name, cs, env, got, span)
        case BuiltinV(name=name, arity=arity, fn=impl, collected=got):
            got = got + (arg,)
            if len(got) < arity:
                return BuiltinV(EMPTY_PROV, name, arity, impl, got)
            return impl(list(got), span)
    raise EvalError("TypeMismatch", f"cannot apply {kind_name(fn)} {show(fn)}", span)


def _dispatch_clauses(name: str, clauses, env: Env, args, span: SourceSpan) -> Value:
    for clause in clauses:
        scope = env.child()
        matched_prov = EMPTY_PROV
        ok = True
        for pat, arg in zip(clause.patterns, args):
            if pat.kind == "var":
                scope.define(pat.name, arg)
            else:
                if not (isinstance(arg, OrderingV) and arg.name == pat.name):
                    ok = False
                    break
                matched_prov |= arg.effective_prov()
        if ok:
            return evaluate(clause.body, scope).with_extra_prov(matched_prov)
    shown = ", ".join(show(a) for a in args)
    raise EvalError("NoMatchingClause", f"no clause of {name!r} matches ({shown})", span)


def _binop(op: str, a: Value, b: Value, span: SourceSpan) -> Value:
    prov = a.effective_prov() | b.effective_prov()
    if op in ("+", "-", "*", "/"):
        if not (isinstance(a, NumV) and isinstance(b, NumV)):
            raise EvalError("TypeMismatch",
                            f"{op} over {kind_name(a)} {show(a)} and {kind_name(b)} {show(b)}",
                            span)
        if op == "/" and b.value == 0:
            raise EvalError("DivisionByZero", f"{show(a)} / 0", span)
        try:
            value = {
                "+": lambda: a.value + b.value,
                "-": lambda: a.value - b.value,
                "*": lambda: a.value * b.value,
                "/": lambda: a.value / b.value,
            }[op]()
        except InvalidOperation as exc:
            raise EvalError("TypeMismatch", f"arithmetic failed: {exc}", span)
        return NumV(prov, value)
    if op == "++":
        if isinstance(a, StrV) and isinstance(b, StrV):
            return StrV(prov, a.value + b.value)
        if isinstance(a, ListV) and isinstance(b, ListV):
            return ListV(a.prov | b.prov, a.elements + b.elements)
        raise EvalError("TypeMismatch",
                        f"++ over {kind_name(a)} and {kind_name(b)}", span)
    if op == "==":
        return BoolV(prov, _scalar_eq(a, b, span))
    if op in ("<=", "<", ">", ">="):
        order = _compare_scalars(a, b, span)
        value = {
            "<=": order <= 0, "<": order < 0, ">": order > 0, ">=": order >= 0,
        }[op]
        return BoolV(prov, value)
    if op in ("and", "or"):
        if not (isinstance(a, BoolV) and isinstance(b, BoolV)):
            raise EvalError("TypeMismatch",
                            f"`{op}` over {kind_name(a)} and {kind_name(b)}", span)
        return BoolV(prov, (a.value and b.value) if op == "and" else (a.value or b.value))
    raise AssertionError(op)


def _scalar_eq(a: Value, b: Value, span: SourceSpan) -> bool:
    if not isinstance(a, _SCALARS) or not isinstance(b, _SCALARS):
        raise EvalError("TypeMismatch",
                        f"== over {kind_name(a)} and {kind_name(b)}", span)
    if type(a) is not type(b):
        return False
    if isinstance(a, OrderingV):
        return a.name == b.name
    return a.value == b.value


def _compare_scalars(a: Value, b: Value, span: SourceSpan) -> int:
    if isinstance(a, NumV) and isinstance(b, NumV):
        return -1 if a.value < b.value else (0 if a.value == b.value else 1)
    if isinstance(a, StrV) and isinstance(b, StrV):
        return -1 if a.value < b.value else (0 if a.value == b.value else 1)
    raise EvalError("TypeMismatch",
                    f"cannot order {kind_name(a)} {show(a)} and {kind_name(b)} {show(b)}",
                    span)


def compare_values(a: Value, b: Value, span: SourceSpan) -> OrderingV:
    order = _compare_scalars(a, b, span)
    name = "LT" if order < 0 else ("EQ" if order == 0 else "GT")
    return OrderingV(a.effective_prov() | b.effective_prov(), name)


def coerce_to_string(v: Value) -> tuple[str, frozenset]:
    """Render a scalar result as text, keeping its provenance."""
    match v:
        case StrV(value=s):
            return s, v.effective_prov()
        case NumV(value=n):
            return num_to_str(n), v.effective_prov()
        case BoolV(value=b):
            return ("true" if b else "false"), v.effective_prov()
    raise EvalError("NotCoercible",
                    f"{kind_name(v)} {show(v)} is not coercible to a string")
