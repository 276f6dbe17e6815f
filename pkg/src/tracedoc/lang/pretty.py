"""Single-line pretty-printer; output re-parses to a structurally equal tree."""

from __future__ import annotations

from decimal import Decimal

from .ast import (
    App, BinOp, BoolLit, ClauseFun, Definition, Expr, FieldAccess, If,
    InterpString, Lambda, Let, ListComp, ListLit, NumLit, OrderingLit,
    Record, StrLit, Var,
)

# Precedence levels, loosest to tightest.
_LOW = 0          # if / let / fun
_ANDOR = 1
_CMP = 2
_CONCAT = 3
_ADD = 4
_MUL = 5
_APP = 6
_POSTFIX = 7
_ATOM = 8

_OP_LEVEL = {
    "and": _ANDOR, "or": _ANDOR,
    "==": _CMP, "<=": _CMP, "<": _CMP, ">": _CMP, ">=": _CMP,
    "++": _CONCAT,
    "+": _ADD, "-": _ADD,
    "*": _MUL, "/": _MUL,
}


def format_decimal(value: Decimal) -> str:
    """Plain decimal text: no exponent, no trailing fractional zeros."""
    if value == 0:
        return "0"
    return format(value.normalize(), "f")


def quote_string(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{out}"'


def pretty(e: Expr) -> str:
    """Render `e` with minimal parentheses."""
    return _render(e, _LOW)


def _render(e: Expr, min_level: int) -> str:
    text, level = _emit(e)
    if level < min_level:
        return f"({text})"
    return text


def _emit(e: Expr) -> tuple[str, int]:
    match e:
        case NumLit(value=v):
            if v < 0:
                return f"({format_decimal(v)})", _ATOM
            return format_decimal(v), _ATOM
        case StrLit(value=s):
            return quote_string(s), _ATOM
        case BoolLit(value=b):
            return "true" if b else "false", _ATOM
        case OrderingLit(name=n):
            return n, _ATOM
        case Var(name=n):
            return n, _ATOM
        case Lambda(params=ps, body=b):
            return f"fun {' '.join(ps)} -> {_render(b, _LOW)}", _LOW
        case App(fn=f, args=args):
            # fn at postfix level: a nested App in fn position must keep its
            # parens or reparsing would flatten the application.
            parts = [_render(f, _POSTFIX)] + [_render(a, _POSTFIX) for a in args]
            return " ".join(parts), _APP
        case Let(bindings=bs, body=body):
            rendered = "; ".join(
                f"{b.name}{''.join(' ' + p for p in b.params)} = {_render(b.value, _LOW)}"
                for b in bs)
            return f"let {rendered} in {_render(body, _LOW)}", _LOW
        case ClauseFun():
            # Only legal as a definition body; rendered through pretty_def.
            return pretty_def(Definition(e.name, e)), _LOW
        case Record(fields=fs):
            if not fs:
                return "{}", _ATOM
            inner = ", ".join(f"{n}: {_render(v, _LOW)}" for n, v in fs)
            return f"{{ {inner} }}", _ATOM
        case FieldAccess(subject=s, field_name=f):
            return f"{_render(s, _POSTFIX)}.{f}", _POSTFIX
        case ListLit(elements=es):
            return f"[{', '.join(_render(x, _LOW) for x in es)}]", _ATOM
        case ListComp(head=h, generators=gens, guards=guards):
            quals = [f"{g.var} <- {_render(g.source, _LOW)}" for g in gens]
            quals += [_render(g, _LOW) for g in guards]
            return f"[{_render(h, _LOW)} | {', '.join(quals)}]", _ATOM
        case If(cond=c, then=t, orelse=o):
            return (f"if {_render(c, _LOW)} then {_render(t, _LOW)} "
                    f"else {_render(o, _LOW)}"), _LOW
        case BinOp(op=op, lhs=l, rhs=r):
            level = _OP_LEVEL[op]
            shown = f"`{op}`" if op in ("and", "or") else op
            if op == "++":  # right-associative
                return f"{_render(l, level + 1)} {shown} {_render(r, level)}", level
            return f"{_render(l, level)} {shown} {_render(r, level + 1)}", level
        case InterpString(segments=segs):
            parts = []
            for s in segs:
                if isinstance(s, str):
                    parts.append(s)
                else:
                    parts.append("{" + _render(s, _LOW) + "}")
            return '"""' + "".join(parts) + '"""', _ATOM
    raise TypeError(f"unknown expression node {e!r}")


def pretty_def(d: Definition) -> str:
    """Render one top-level definition, ClauseFun as repeated clauses."""
    e = d.expr
    if isinstance(e, ClauseFun):
        lines = []
        for i, clause in enumerate(e.clauses):
            lead = "let " if i == 0 else "    "
            pats = " ".join(p.name for p in clause.patterns)
            lines.append(f"{lead}{d.name} {pats} = {_render(clause.body, _LOW)};")
        return "\n".join(lines)
    if isinstance(e, Lambda):
        params = " ".join(e.params)
        return f"let {d.name} {params} = {_render(e.body, _LOW)};"
    return f"let {d.name} = {_render(e, _LOW)};"


def pretty_defs(defs: list[Definition]) -> str:
    return "\n".join(pretty_def(d) for d in defs)
