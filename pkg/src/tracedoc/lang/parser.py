"""Recursive-descent parser.

Precedence, loosest to tightest: `and`/`or` (backtick infix), comparisons,
`++`, additive, multiplicative, application by juxtaposition, field access.
`if`/`let`/`fun` forms parse at expression level and must be parenthesized
in operand position.
"""

from __future__ import annotations


from ..errors import ParseError, SourceSpan
from .ast import (
    App, BinOp, Binding, BoolLit, Clause, ClauseFun, Definition, Expr,
    FieldAccess, Generator, If, InterpString, Lambda, Let, ListComp, ListLit,
    NumLit, OrderingLit, Pattern, Record, StrLit, Var,
)
from .tokens import Token, tokenize

ORDERING_NAMES = ("LT", "EQ", "GT")
_CMP_OPS = ("==", "<=", "<", ">", ">=")
_ARG_STARTERS = {"num", "str", "ident", "(", "[", "{", "tq_open"}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing -------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if self.pos < len(self.tokens) - 1:
            self.pos += 1
        return t

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        if self.at(kind, text):
            return self.advance()
        wanted = what or (text or kind)
        t = self.peek()
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"expected {wanted}, found {found}", t.span, [wanted])

    def fail(self, message: str, expected: list[str] | None = None):
        raise ParseError(message, self.peek().span, expected)

    # -- expressions ----------------------------------------------------

    def expression(self) -> Expr:
        if self.at("kw", "if"):
            return self.if_expr()
        if self.at("kw", "let"):
            return self.let_expr()
        if self.at("kw", "fun"):
            return self.fun_expr()
        return self.and_or()

    def if_expr(self) -> Expr:
        start = self.expect("kw", "if").span.start
        cond = self.expression()
        self.expect("kw", "then")
        then = self.expression()
        self.expect("kw", "else")
        orelse = self.expression()
        return If(cond, then, orelse, SourceSpan(start, self._end(orelse)))

    def let_expr(self) -> Expr:
        start = self.expect("kw", "let").span.start
        bindings = [self.binding()]
        while self.at(";"):
            self.advance()
            if self.at("kw", "in"):
                break
            bindings.append(self.binding())
        self.expect("kw", "in")
        body = self.expression()
        return Let(tuple(bindings), body, SourceSpan(start, self._end(body)))

    def binding(self) -> Binding:
        name = self.expect("ident", what="binding name").text
        params: list[str] = []
        while self.at("ident"):
            params.append(self.advance().text)
        self.expect("=")
        return Binding(name, tuple(params), self.expression())

    def fun_expr(self) -> Expr:
        start = self.expect("kw", "fun").span.start
        params: list[str] = []
        while self.at("ident"):
            params.append(self.advance().text)
        if not params:
            self.fail("fun requires at least one parameter", ["parameter name"])
        self.expect("->")
        body = self.expression()
        return Lambda(tuple(params), body, SourceSpan(start, self._end(body)))

    def and_or(self) -> Expr:
        left = self.comparison()
        while self.at("backtick"):
            op = self.advance().value
            right = self.comparison()
            left = BinOp(op, left, right, self._join(left, right))
        return left

    def comparison(self) -> Expr:
        left = self.concat()
        while self.peek().kind in _CMP_OPS:
            op = self.advance().kind
            right = self.concat()
            left = BinOp(op, left, right, self._join(left, right))
        return left

    def concat(self) -> Expr:
        left = self.additive()
        if self.at("++"):
            self.advance()
            right = self.concat()  # right-associative
            return BinOp("++", left, right, self._join(left, right))
        return left

    def additive(self) -> Expr:
        left = self.multiplicative()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            right = self.multiplicative()
            left = BinOp(op, left, right, self._join(left, right))
        return left

    def multiplicative(self) -> Expr:
        left = self.application()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            right = self.application()
            left = BinOp(op, left, right, self._join(left, right))
        return left

    def application(self) -> Expr:
        head = self.postfix()
        args: list[Expr] = []
        while self.peek().kind in _ARG_STARTERS:
            args.append(self.postfix())
        if not args:
            return head
        return App(head, tuple(args), self._join(head, args[-1]))

    def postfix(self) -> Expr:
        e = self.atom()
        while self.at("."):
            self.advance()
            name = self.expect("ident", what="field name")
            e = FieldAccess(e, name.text, SourceSpan(self._start(e), name.span.end))
        return e

    def atom(self) -> Expr:
        t = self.peek()
        if t.kind == "num":
            self.advance()
            return NumLit(t.value, t.span)
        if t.kind == "-" and self.peek(1).kind == "num":
            self.advance()
            num = self.advance()
            return NumLit(-num.value, SourceSpan(t.span.start, num.span.end))
        if t.kind == "str":
            self.advance()
            return StrLit(t.value, t.span)
        if t.kind == "ident":
            self.advance()
            if t.text in ORDERING_NAMES:
                return OrderingLit(t.text, t.span)
            if t.text in ("true", "false"):
                return BoolLit(t.text == "true", t.span)
            return Var(t.text, t.span)
        if t.kind == "(":
            self.advance()
            e = self.expression()
            self.expect(")")
            return e
        if t.kind == "[":
            return self.list_or_comprehension()
        if t.kind == "{":
            return self.record()
        if t.kind == "tq_open":
            return self.interp_string()
        if t.kind == "eof":
            self.fail("unexpected end of input", ["expression"])
        self.fail(f"unexpected {t.text!r}", ["expression"])

    def list_or_comprehension(self) -> Expr:
        start = self.expect("[").span.start
        if self.at("]"):
            end = self.advance().span.end
            return ListLit((), SourceSpan(start, end))
        head = self.expression()
        if self.at("|"):
            self.advance()
            generators: list[Generator] = []
            guards: list[Expr] = []
            while True:
                if self.at("ident") and self.peek(1).kind == "<-":
                    var = self.advance().text
                    self.advance()
                    generators.append(Generator(var, self.expression()))
                else:
                    guards.append(self.expression())
                if self.at(","):
                    self.advance()
                    continue
                break
            end = self.expect("]").span.end
            if not generators:
                raise ParseError("comprehension requires at least one generator",
                                 SourceSpan(start, end))
            return ListComp(head, tuple(generators), tuple(guards), SourceSpan(start, end))
        elements = [head]
        while self.at(","):
            self.advance()
            elements.append(self.expression())
        end = self.expect("]").span.end
        return ListLit(tuple(elements), SourceSpan(start, end))

    def record(self) -> Expr:
        start = self.expect("{").span.start
        fields: list[tuple[str, Expr]] = []
        if not self.at("}"):
            while True:
                name = self.expect("ident", what="field name").text
                self.expect(":")
                fields.append((name, self.expression()))
                if self.at(","):
                    self.advance()
                    continue
                break
        end = self.expect("}").span.end
        seen: set[str] = set()
        for name, _ in fields:
            if name in seen:
                raise ParseError(f"duplicate record field {name!r}", SourceSpan(start, end))
            seen.add(name)
        return Record(tuple(fields), SourceSpan(start, end))

    def interp_string(self) -> Expr:
        start = self.expect("tq_open").span.start
        segments: list[object] = []
        while not self.at("tq_close"):
            if self.at("text"):
                segments.append(self.advance().value)
            elif self.at("{"):
                self.advance()
                segments.append(self.expression())
                self.expect("}")
            else:
                self.fail("malformed interpolated string")
        end = self.advance().span.end
        if not segments:
            segments = [""]
        return InterpString(tuple(segments), SourceSpan(start, end))

    # -- top-level definitions -------------------------------------------

    def definitions(self) -> list[Definition]:
        groups: list[tuple[str, list[Clause], bool, SourceSpan]] = []
        while not self.at("eof"):
            self.expect("kw", "let", what="'let'")
            self.def_clause_group(groups)
        return self._merge_groups(groups)

    def def_clause_group(self, groups) -> None:
        name_tok = self.expect("ident", what="definition name")
        self.one_clause(groups, name_tok)
        # Continuation clauses repeat the name without `let`.
        while self.at("ident") and self.peek().text == groups[-1][0]:
            self.one_clause(groups, self.expect("ident"))

    def one_clause(self, groups, name_tok: Token) -> None:
        name = name_tok.text
        patterns: list[Pattern] = []
        while self.at("ident"):
            t = self.advance()
            if t.text in ORDERING_NAMES:
                patterns.append(Pattern("ordering", t.text))
            else:
                patterns.append(Pattern("var", t.text))
        self.expect("=")
        body = self.expression()
        if self.at(";"):
            self.advance()
        elif not self.at("eof"):
            self.expect(";", what="';' after definition")
        span = SourceSpan(name_tok.span.start, self._end(body))
        groups.append((name, [Clause(tuple(patterns), body)], span))

    def _merge_groups(self, groups) -> list[Definition]:
        merged: list[tuple[str, list[Clause], SourceSpan]] = []
        for name, clauses, span in groups:
            if merged and merged[-1][0] == name:
                prev_name, prev_clauses, prev_span = merged[-1]
                if not (prev_clauses[0].patterns and clauses[0].patterns):
                    raise ParseError(f"duplicate definition of {name!r}", span)
                if len(prev_clauses[0].patterns) != len(clauses[0].patterns):
                    raise ParseError(f"clauses of {name!r} have different arity", span)
                merged[-1] = (name, prev_clauses + clauses,
                              SourceSpan(prev_span.start, span.end))
            else:
                merged.append((name, clauses, span))
        defs: list[Definition] = []
        names: set[str] = set()
        for name, clauses, span in merged:
            if name in names:
                raise ParseError(f"duplicate definition of {name!r}", span)
            names.add(name)
            clausal = len(clauses) > 1 or any(
                p.kind == "ordering" for p in clauses[0].patterns)
            if clausal:
                defs.append(Definition(name, ClauseFun(name, tuple(clauses), span), span))
            elif clauses[0].patterns:
                params = tuple(p.name for p in clauses[0].patterns)
                defs.append(Definition(name, Lambda(params, clauses[0].body, span), span))
            else:
                defs.append(Definition(name, clauses[0].body, span))
        return defs

    # -- span helpers -----------------------------------------------------

    @staticmethod
    def _start(e: Expr) -> int:
        return e.span.start

    @staticmethod
    def _end(e: Expr) -> int:
        return e.span.end

    def _join(self, a: Expr, b: Expr) -> SourceSpan:
        return SourceSpan(a.span.start, b.span.end)


def parse_expr(source: str) -> Expr:
    """Parse a single expression; raises ParseError."""
    p = _Parser(tokenize(source))
    e = p.expression()
    if not p.at("eof"):
        t = p.peek()
        raise ParseError(f"unexpected trailing {t.text!r}", t.span, ["end of input"])
    return e


def parse_defs(source: str) -> list[Definition]:
    """Parse semicolon-separated top-level `let` definitions.

    Adjacent clauses for the same name merge into one ClauseFun; repeating a
    non-clause name is an error.
    """
    return _Parser(tokenize(source)).definitions()
