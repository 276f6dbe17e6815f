from .ast import (
    App, BinOp, Binding, BoolLit, Clause, ClauseFun, Definition, Expr,
    FieldAccess, Generator, If, InterpString, Lambda, Let, ListComp, ListLit,
    NumLit, OrderingLit, Pattern, Record, StrLit, Var, free_vars,
)
from .parser import parse_defs, parse_expr
from .pretty import format_decimal, pretty, pretty_def, pretty_defs, quote_string
from .tokens import Token, tokenize

__all__ = [
    "App", "BinOp", "Binding", "BoolLit", "Clause", "ClauseFun", "Definition",
    "Expr", "FieldAccess", "Generator", "If", "InterpString", "Lambda", "Let",
    "ListComp", "ListLit", "NumLit", "OrderingLit", "Pattern", "Record",
    "StrLit", "Var", "free_vars", "parse_defs", "parse_expr",
    "format_decimal", "pretty", "pretty_def", "pretty_defs", "quote_string",
    "Token", "tokenize",
]
