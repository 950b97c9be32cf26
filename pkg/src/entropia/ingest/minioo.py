"""Lexer and recursive-descent parser for MiniOO, a small Java-like language.

Grammar (informal)::

    file    := class*
    class   := "class" IDENT ["extends" IDENT] "{" member* "}"
    member  := TYPE IDENT ";"  |  TYPE IDENT "(" [param ("," param)*] ")" block
    param   := TYPE IDENT
    stmt    := block | if | while | for | switch | return | break ";"
             | TYPE IDENT ["=" expr] ";" | expr ["=" expr] ";"
    TYPE    := IDENT | "void" | "int" | "bool" | "string"

Comments are ``//`` to end of line and ``/* ... */``.

Each file is parsed independently into :class:`ParsedClass` records. Field
uses and receiver types can depend on inherited fields declared in other
files, so :func:`parse_source` links everything in one pass at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from entropia.model import (
    SELF,
    UNKNOWN,
    CallSite,
    ClassDef,
    ClassModel,
    FieldDef,
    MethodDef,
    SourceStats,
    build_model,
)

KEYWORDS = frozenset(
    {
        "class", "extends", "if", "else", "while", "for", "return", "break",
        "switch", "case", "default", "void", "int", "bool", "string",
        "true", "false", "null", "this",
    }
)
TYPE_KEYWORDS = frozenset({"void", "int", "bool", "string"})
OPERATORS = ("==", "!=", "<=", ">=", "&&", "||", "{", "}", "(", ")", ";", ",", ".",
             "=", "+", "-", "*", "/", "%", "<", ">", "!", ":")


class MiniOOSyntaxError(SyntaxError):
    """Parse failure with file, 1-based line/column and the expected tokens."""

    def __init__(self, path: str, line: int, column: int, expected: Iterable[str], got: str):
        self.path = path
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        self.got = got
        wanted = ", ".join(sorted(self.expected))
        super().__init__(f"{path}:{line}:{column}: expected {wanted}; got {got}")


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, number, string, op, eof
    value: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of file" if self.kind == "eof" else repr(self.value)


@dataclass
class LineMap:
    code: set[int] = field(default_factory=set)
    comment: set[int] = field(default_factory=set)


def tokenize(path: str, text: str) -> tuple[list[Token], LineMap]:
    tokens: list[Token] = []
    lines = LineMap()
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if text.startswith("//", i):
            end = text.find("\n", i)
            end = n if end < 0 else end
            lines.comment.add(line)
            col += end - i
            i = end
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                raise MiniOOSyntaxError(path, line, col, {"'*/'"}, "end of file")
            body = text[i : end + 2]
            for k, chunk in enumerate(body.split("\n")):
                if chunk.strip():
                    lines.comment.add(line + k)
            newlines = body.count("\n")
            if newlines:
                line += newlines
                col = len(body) - body.rfind("\n")
            else:
                col += len(body)
            i = end + 2
            continue
        start_col = col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            tokens.append(Token("keyword" if word in KEYWORDS else "ident", word, line, start_col))
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("number", text[i:j], line, start_col))
        elif ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                j += 2 if text[j] == "\\" else 1
            if j >= n or text[j] != '"':
                raise MiniOOSyntaxError(path, line, start_col, {"closing '\"'"}, "end of line")
            j += 1
            tokens.append(Token("string", text[i:j], line, start_col))
        else:
            op = next((o for o in OPERATORS if text.startswith(o, i)), None)
            if op is None:
                raise MiniOOSyntaxError(path, line, col, {"token"}, repr(ch))
            j = i + len(op)
            tokens.append(Token("op", op, line, start_col))
        lines.code.add(line)
        col += j - i
        i = j
    tokens.append(Token("eof", "", line, col))
    return tokens, lines


def line_stats(text: str, lines: LineMap) -> tuple[int, int, int, int]:
    """(total, blank, comment-only, code) line counts; mixed lines count as code."""
    physical = text.splitlines()
    blank = comment = code = 0
    for no, raw in enumerate(physical, start=1):
        if no in lines.code:
            code += 1
        elif not raw.strip():
            blank += 1
        elif no in lines.comment:
            comment += 1
        else:  # pragma: no cover - every non-blank line holds a token or comment
            code += 1
    return len(physical), blank, comment, code


# Receiver descriptors recorded at parse time, resolved by the linker.
@dataclass(frozen=True)
class RawCall:
    kind: str  # "self", "type" (declared local/param type), "name" (free identifier), "unknown"
    target: str
    method: str
    arity: int


@dataclass
class ParsedMethod:
    name: str
    return_type: str
    params: list[tuple[str, str]]
    decision_points: int = 0
    calls: list[RawCall] = field(default_factory=list)
    free_names: set[str] = field(default_factory=set)
    line: int = 0


@dataclass
class ParsedClass:
    name: str
    parent: str | None
    fields: list[FieldDef]
    methods: list[ParsedMethod]
    path: str
    line: int


@dataclass
class ParsedFile:
    path: str
    classes: list[ParsedClass]
    stats: SourceStats


_EXPR_START = {"identifier", "number", "string", "'('", "'!'", "'-'", "'this'", "'true'", "'false'", "'null'"}


class Parser:
    def __init__(self, path: str, tokens: Sequence[Token]):
        self.path = path
        self.tokens = tokens
        self.pos = 0
        self.executable = 0
        self.declarative = 0
        self._method: ParsedMethod | None = None
        self._scopes: list[dict[str, str]] = []

    # -- token helpers -------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, value: str) -> bool:
        t = self.tok
        return t.kind in ("op", "keyword") and t.value == value

    def accept(self, value: str) -> bool:
        if self.at(value):
            self.pos += 1
            return True
        return False

    def fail(self, expected: Iterable[str]) -> MiniOOSyntaxError:
        t = self.tok
        return MiniOOSyntaxError(self.path, t.line, t.column, expected, t.describe())

    def expect(self, value: str) -> Token:
        if not self.at(value):
            raise self.fail({repr(value)})
        t = self.tok
        self.pos += 1
        return t

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.fail({"identifier"})
        t = self.tok
        self.pos += 1
        return t

    def at_type(self) -> bool:
        return self.tok.kind == "ident" or (self.tok.kind == "keyword" and self.tok.value in TYPE_KEYWORDS)

    def type_name(self) -> str:
        if not self.at_type():
            raise self.fail({"identifier", "'void'", "'int'", "'bool'", "'string'"})
        t = self.tok
        self.pos += 1
        return t.value

    # -- declarations --------------------------------------------------

    def parse_file(self) -> list[ParsedClass]:
        classes = []
        while self.tok.kind != "eof":
            if not self.at("class"):
                raise self.fail({"'class'", "end of file"})
            classes.append(self.parse_class())
        return classes

    def parse_class(self) -> ParsedClass:
        line = self.expect("class").line
        name = self.ident().value
        parent = self.ident().value if self.accept("extends") else None
        self.expect("{")
        fields: list[FieldDef] = []
        methods: list[ParsedMethod] = []
        while not self.accept("}"):
            if self.tok.kind == "eof":
                raise self.fail({"'}'", "member declaration"})
            member_line = self.tok.line
            tp = self.type_name()
            member = self.ident().value
            if self.accept(";"):
                fields.append(FieldDef(member, tp))
                self.declarative += 1
            elif self.at("("):
                methods.append(self.parse_method(tp, member, member_line))
            else:
                raise self.fail({"';'", "'('"})
        return ParsedClass(name, parent, fields, methods, self.path, line)

    def parse_method(self, return_type: str, name: str, line: int) -> ParsedMethod:
        self.expect("(")
        params: list[tuple[str, str]] = []
        if not self.accept(")"):
            if not self.at_type():
                raise self.fail({"')'", "parameter type"})
            while True:
                tp = self.type_name()
                params.append((tp, self.ident().value))
                if self.accept(")"):
                    break
                if not self.accept(","):
                    raise self.fail({"','", "')'"})
        method = ParsedMethod(name, return_type, params, line=line)
        self._method = method
        self._scopes = [{pname: ptype for ptype, pname in params}]
        self.parse_block()
        self._method = None
        return method

    # -- statements ----------------------------------------------------

    def parse_block(self) -> None:
        self.expect("{")
        self._scopes.append({})
        while not self.accept("}"):
            if self.tok.kind == "eof":
                raise self.fail({"'}'", "statement"})
            self.parse_statement()
        self._scopes.pop()

    def parse_statement(self) -> None:
        t = self.tok
        if self.at("{"):
            self.parse_block()
        elif self.accept("if"):
            self.executable += 1
            self._method.decision_points += 1
            self.parse_condition()
            self.parse_statement()
            if self.accept("else"):
                self.parse_statement()
        elif self.accept("while"):
            self.executable += 1
            self._method.decision_points += 1
            self.parse_condition()
            self.parse_statement()
        elif self.accept("for"):
            self.parse_for()
        elif self.accept("switch"):
            self.parse_switch()
        elif self.accept("return"):
            self.executable += 1
            if not self.at(";"):
                self.parse_expr()
            self.expect(";")
        elif self.accept("break"):
            self.executable += 1
            self.expect(";")
        elif self.at_local_decl():
            self.parse_local_decl()
            self.expect(";")
        elif t.kind in ("ident", "number", "string") or t.value in ("(", "!", "-", "this", "true", "false", "null"):
            self.parse_simple()
            self.expect(";")
        else:
            raise self.fail({"statement"})

    def parse_condition(self) -> None:
        self.expect("(")
        self.parse_expr()
        self.expect(")")

    def at_local_decl(self) -> bool:
        t = self.tok
        if t.kind == "keyword" and t.value in TYPE_KEYWORDS - {"void"}:
            return True
        return t.kind == "ident" and self.peek().kind == "ident"

    def parse_local_decl(self) -> None:
        tp = self.type_name()
        name = self.ident().value
        if self.accept("="):
            self.parse_expr()
        self._scopes[-1][name] = tp
        self.declarative += 1

    def parse_simple(self) -> None:
        """Expression statement, optionally an assignment."""
        self.executable += 1
        self.parse_expr()
        if self.accept("="):
            self.parse_expr()

    def parse_for(self) -> None:
        self.executable += 1
        self._method.decision_points += 1
        self.expect("(")
        self._scopes.append({})
        if not self.at(";"):
            if self.at_local_decl():
                self.parse_local_decl()
            else:
                self.parse_expr()
                if self.accept("="):
                    self.parse_expr()
        self.expect(";")
        if not self.at(";"):
            self.parse_expr()
        self.expect(";")
        if not self.at(")"):
            self.parse_expr()
            if self.accept("="):
                self.parse_expr()
        self.expect(")")
        self.parse_statement()
        self._scopes.pop()

    def parse_switch(self) -> None:
        self.executable += 1
        self.parse_condition()
        self.expect("{")
        seen_default = False
        while not self.accept("}"):
            if self.accept("case"):
                self._method.decision_points += 1
                self.parse_expr()
            elif not seen_default and self.accept("default"):
                seen_default = True
            else:
                raise self.fail({"'case'", "'default'", "'}'"} if not seen_default else {"'case'", "'}'"})
            self.expect(":")
            self._scopes.append({})
            while not (self.at("case") or self.at("default") or self.at("}")):
                if self.tok.kind == "eof":
                    raise self.fail({"'}'"})
                self.parse_statement()
            self._scopes.pop()

    # -- expressions ---------------------------------------------------
    # Each parse_* returns a receiver descriptor: ("name", id), ("this", ""),
    # or ("other", "") for anything whose static type is not tracked.

    _BINARY = (("||",), ("&&",), ("==", "!="), ("<", ">", "<=", ">="), ("+", "-"), ("*", "/", "%"))

    def parse_expr(self, level: int = 0) -> tuple[str, str]:
        if level == len(self._BINARY):
            return self.parse_unary()
        left = self.parse_expr(level + 1)
        while self.tok.kind == "op" and self.tok.value in self._BINARY[level]:
            self.pos += 1
            self.parse_expr(level + 1)
            left = ("other", "")
        return left

    def parse_unary(self) -> tuple[str, str]:
        if self.accept("!") or self.accept("-"):
            self.parse_unary()
            return ("other", "")
        return self.parse_postfix()

    def parse_postfix(self) -> tuple[str, str]:
        desc = self.parse_primary()
        while self.accept("."):
            member = self.ident().value
            if self.at("("):
                arity = self.parse_args()
                self.record_call(desc, member, arity)
            elif desc[0] == "this":
                self._method.free_names.add(member)
            desc = ("other", "")
        return desc

    def parse_primary(self) -> tuple[str, str]:
        t = self.tok
        if t.kind in ("number", "string") or t.value in ("true", "false", "null") and t.kind == "keyword":
            self.pos += 1
            return ("other", "")
        if self.accept("this"):
            return ("this", "")
        if self.accept("("):
            self.parse_expr()
            self.expect(")")
            return ("other", "")
        if t.kind == "ident":
            self.pos += 1
            if self.at("("):
                arity = self.parse_args()
                self._method.calls.append(RawCall("self", "", t.value, arity))
                return ("other", "")
            if self.lookup_local(t.value) is None:
                self._method.free_names.add(t.value)
            return ("name", t.value)
        raise self.fail(_EXPR_START)

    def parse_args(self) -> int:
        self.expect("(")
        if self.accept(")"):
            return 0
        count = 0
        while True:
            self.parse_expr()
            count += 1
            if self.accept(")"):
                return count
            if not self.accept(","):
                raise self.fail({"','", "')'"})

    def lookup_local(self, name: str) -> str | None:
        for scope in reversed(self._scopes):
            if name in scope:
                return scope[name]
        return None

    def record_call(self, desc: tuple[str, str], method: str, arity: int) -> None:
        kind, ident = desc
        if kind == "this":
            raw = RawCall("self", "", method, arity)
        elif kind == "name":
            local_type = self.lookup_local(ident)
            raw = RawCall("type", local_type, method, arity) if local_type else RawCall("name", ident, method, arity)
        else:
            raw = RawCall("unknown", UNKNOWN, method, arity)
        self._method.calls.append(raw)


def parse_file(path: str, text: str) -> ParsedFile:
    tokens, line_map = tokenize(path, text)
    parser = Parser(path, tokens)
    classes = parser.parse_file()
    total, blank, comment, code = line_stats(text, line_map)
    stats = SourceStats(
        files=1,
        lines=total,
        blank=blank,
        comment=comment,
        code=code,
        executable=parser.executable,
        declarative=parser.declarative,
    )
    return ParsedFile(path, classes, stats)


def link(parsed: Sequence[ParsedFile]) -> ClassModel:
    """Resolve field uses and call receivers across files, then build the model."""
    by_name: dict[str, ParsedClass] = {}
    ordered: list[ParsedClass] = []
    for pf in parsed:
        for pc in pf.classes:
            ordered.append(pc)
            by_name.setdefault(pc.name, pc)

    def visible(pc: ParsedClass) -> dict[str, str]:
        fields: dict[str, str] = {}
        seen: set[str] = set()
        cur: ParsedClass | None = pc
        while cur is not None and cur.name not in seen:
            seen.add(cur.name)
            for f in cur.fields:
                fields.setdefault(f.name, f.declared_type)
            cur = by_name.get(cur.parent) if cur.parent else None
        return fields

    classes = []
    external_parents = set()
    for pc in ordered:
        if pc.parent is not None and pc.parent not in by_name:
            external_parents.add(pc.parent)
        vis = visible(pc)
        methods = []
        for pm in pc.methods:
            calls = []
            for rc in pm.calls:
                if rc.kind == "self":
                    receiver = SELF
                elif rc.kind == "type":
                    receiver = rc.target
                elif rc.kind == "name":
                    # a field shadows a class of the same name
                    receiver = vis.get(rc.target, rc.target)
                else:
                    receiver = rc.target
                calls.append(CallSite(receiver, rc.method, rc.arity))
            methods.append(
                MethodDef(
                    name=pm.name,
                    arity=len(pm.params),
                    decision_points=pm.decision_points,
                    calls=tuple(calls),
                    field_uses=frozenset(n for n in pm.free_names if n in vis),
                )
            )
        classes.append(ClassDef(pc.name, pc.parent, tuple(pc.fields), tuple(methods)))

    stats = None
    for pf in parsed:
        stats = pf.stats if stats is None else stats + pf.stats
    return build_model(classes, stats or SourceStats(), external=external_parents)


def parse_source(files: Iterable[tuple[str, str]]) -> ClassModel:
    """Parse ``(path, text)`` pairs into one :class:`ClassModel`."""
    return link([parse_file(path, text) for path, text in files])

