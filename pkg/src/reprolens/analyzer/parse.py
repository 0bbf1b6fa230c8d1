"""Recursive-descent structural parser for a Java subset.

The grammar covers declarations, imports, blocks, statements and expressions
with balanced delimiters; full language conformance is explicitly not
attempted. Acceptance by this grammar is what the toolkit calls "parsable".

Structural facts (declared types, methods, imports, try/catch, referenced
type names, constructor and static calls) are collected through an
append-only journal so speculative parses roll back cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .tokens import MODIFIERS, PRIMITIVES, Token, TokenizeError, tokenize


class ParseFailure(Exception):
    def __init__(self, message: str, pos: int = 0) -> None:
        super().__init__(message)
        self.pos = pos


@dataclass(frozen=True)
class Param:
    base_type: str  # simple or qualified base name, or primitive
    dims: int
    varargs: bool
    name: str


@dataclass(frozen=True)
class MethodInfo:
    name: str
    modifiers: frozenset[str]
    return_type: str | None  # None for constructors
    return_dims: int
    params: tuple[Param, ...]
    throws: tuple[str, ...]
    is_constructor: bool


@dataclass
class ParseResult:
    imports: list[str] = field(default_factory=list)
    types: list[str] = field(default_factory=list)
    public_types: list[str] = field(default_factory=list)
    methods: list[MethodInfo] = field(default_factory=list)
    try_catch_count: int = 0
    referenced: set[str] = field(default_factory=set)
    type_vars: set[str] = field(default_factory=set)
    constructor_calls: set[str] = field(default_factory=set)
    static_calls: set[str] = field(default_factory=set)


def parse_compilation_unit(source: str) -> ParseResult:
    """Parse source as a compilation unit; raises ParseFailure on rejection.

    Total over all inputs: pathological nesting beyond the recursion budget
    is rejected like any other malformed input.
    """
    try:
        tokens = tokenize(source)
    except TokenizeError as exc:
        raise ParseFailure(str(exc)) from None
    parser = _Parser(tokens)
    try:
        parser.compilation_unit()
    except RecursionError:
        raise ParseFailure("nesting too deep") from None
    return parser.build_result()


def split_import_header(source: str) -> tuple[str, str]:
    """Split source into its leading package/import block and the remainder.

    Used when wrapping snippets: imports must stay above the synthetic class.
    Returns ("", source) when there is no leading header.
    """
    try:
        tokens = tokenize(source)
    except TokenizeError:
        return "", source
    parser = _Parser(tokens)
    end = 0
    try:
        if parser.at_keyword("package"):
            parser.advance()
            parser.qualified_name()
            tok = parser.expect_punct(";")
            end = tok.end
        while parser.at_keyword("import"):
            parser.advance()
            if parser.at_keyword("static"):
                parser.advance()
            parser.qualified_name()
            if parser.at_punct("."):
                parser.advance()
                parser.expect_punct("*")
            tok = parser.expect_punct(";")
            end = tok.end
    except ParseFailure:
        return "", source
    if end == 0:
        return "", source
    return source[:end], source[end:]


_STATEMENT_KEYWORDS = frozenset(
    "if while do for switch try return throw break continue synchronized assert".split()
)

_ASSIGN_OPS = frozenset(["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<="])

_BINARY_LEVELS: tuple[tuple[str, ...], ...] = (
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", "<=", ">", "instanceof"),  # '>'-built ops are assembled separately
    ("<<",),  # '>>' and '>>>' are assembled from single '>' tokens
    ("+", "-"),
    ("*", "/", "%"),
)


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.i = 0
        self.events: list[tuple] = []

    # -- token helpers -----------------------------------------------------

    def peek(self, k: int = 0) -> Token:
        j = min(self.i + k, len(self.tokens) - 1)
        return self.tokens[j]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at_punct(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok.kind == "punct" and tok.text == text

    def at_keyword(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok.kind == "keyword" and tok.text == text

    def at_ident(self, k: int = 0) -> bool:
        return self.peek(k).kind == "ident"

    def expect_punct(self, text: str) -> Token:
        if not self.at_punct(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def expect_keyword(self, text: str) -> Token:
        if not self.at_keyword(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if not self.at_ident():
            self.fail("expected identifier")
        return self.advance()

    def fail(self, message: str) -> None:
        tok = self.peek()
        raise ParseFailure(f"{message}, found {tok.text!r}", tok.pos)

    def mark(self) -> tuple[int, int]:
        return self.i, len(self.events)

    def rewind(self, mark: tuple[int, int]) -> None:
        self.i, n = mark
        del self.events[n:]

    def try_parse(self, fn, *args):
        mark = self.mark()
        try:
            return True, fn(*args)
        except ParseFailure:
            self.rewind(mark)
            return False, None

    # -- events --------------------------------------------------------------

    def emit(self, *event) -> None:
        self.events.append(event)

    def build_result(self) -> ParseResult:
        result = ParseResult()
        for event in self.events:
            kind = event[0]
            if kind == "import":
                result.imports.append(event[1])
            elif kind == "type":
                result.types.append(event[1])
                if event[2]:
                    result.public_types.append(event[1])
            elif kind == "method":
                result.methods.append(event[1])
            elif kind == "try":
                result.try_catch_count += 1
            elif kind == "ref":
                result.referenced.add(event[1])
            elif kind == "typevar":
                result.type_vars.add(event[1])
            elif kind == "ctor_call":
                result.constructor_calls.add(event[1])
            elif kind == "static_call":
                result.static_calls.add(event[1])
        result.referenced -= result.type_vars
        return result

    def register_type_use(self, segments: list[str]) -> None:
        # qualified names carry their package; only bare capitalized simple
        # names need import resolution
        if len(segments) == 1 and segments[0][:1].isupper():
            self.emit("ref", segments[0])

    # -- compilation unit ------------------------------------------------------

    def compilation_unit(self) -> None:
        if self.at_keyword("package"):
            self.advance()
            self.qualified_name()
            self.expect_punct(";")
        while self.at_keyword("import"):
            self.import_decl()
        while not self.peek().kind == "eof":
            if self.at_punct(";"):
                self.advance()
                continue
            self.type_decl()
        if self.peek().kind != "eof":
            self.fail("trailing input after type declarations")

    def import_decl(self) -> None:
        self.expect_keyword("import")
        if self.at_keyword("static"):
            self.advance()
        parts = [self.expect_ident().text]
        while self.at_punct("."):
            self.advance()
            if self.at_punct("*"):
                self.advance()
                parts.append("*")
                break
            parts.append(self.expect_ident().text)
        self.expect_punct(";")
        self.emit("import", ".".join(parts))

    def qualified_name(self) -> list[str]:
        parts = [self.expect_ident().text]
        while self.at_punct(".") and self.at_ident(1):
            self.advance()
            parts.append(self.expect_ident().text)
        return parts

    # -- declarations ------------------------------------------------------------

    def modifiers_and_annotations(self) -> frozenset[str]:
        mods: set[str] = set()
        while True:
            tok = self.peek()
            if tok.kind == "keyword" and tok.text in MODIFIERS:
                mods.add(tok.text)
                self.advance()
            elif self.at_punct("@") and not self.at_keyword("interface", 1):
                self.annotation()
            else:
                return frozenset(mods)

    def annotation(self) -> None:
        self.expect_punct("@")
        parts = self.qualified_name()
        self.register_type_use(parts)
        if self.at_punct("("):
            self.skip_balanced("(", ")")

    def skip_balanced(self, open_text: str, close_text: str) -> None:
        self.expect_punct(open_text)
        depth = 1
        while depth:
            tok = self.peek()
            if tok.kind == "eof":
                self.fail(f"unbalanced {open_text!r}")
            if tok.kind == "punct":
                if tok.text == open_text:
                    depth += 1
                elif tok.text == close_text:
                    depth -= 1
            self.advance()

    def type_decl(self) -> None:
        mods = self.modifiers_and_annotations()
        public = "public" in mods
        if self.at_punct("@") and self.at_keyword("interface", 1):
            self.advance()
            self.advance()
            name = self.expect_ident().text
            self.emit("type", name, public)
            self.class_body()
            return
        if self.at_keyword("class") or self.at_keyword("interface"):
            self.class_or_interface_decl(public)
        elif self.at_keyword("enum"):
            self.enum_decl(public)
        else:
            self.fail("expected a type declaration")

    def class_or_interface_decl(self, public: bool = False) -> None:
        self.advance()  # class | interface
        name = self.expect_ident().text
        self.emit("type", name, public)
        if self.at_punct("<"):
            self.type_parameters()
        if self.at_keyword("extends"):
            self.advance()
            self.parse_type()
            while self.at_punct(","):
                self.advance()
                self.parse_type()
        if self.at_keyword("implements"):
            self.advance()
            self.parse_type()
            while self.at_punct(","):
                self.advance()
                self.parse_type()
        self.class_body()

    def enum_decl(self, public: bool = False) -> None:
        self.expect_keyword("enum")
        name = self.expect_ident().text
        self.emit("type", name, public)
        if self.at_keyword("implements"):
            self.advance()
            self.parse_type()
            while self.at_punct(","):
                self.advance()
                self.parse_type()
        self.expect_punct("{")
        while self.at_punct("@") or self.at_ident():
            while self.at_punct("@"):
                self.annotation()
            self.expect_ident()
            if self.at_punct("("):
                self.arguments()
            if self.at_punct("{"):
                self.class_body()
            if self.at_punct(","):
                self.advance()
                continue
            break
        if self.at_punct(";"):
            self.advance()
            while not self.at_punct("}"):
                self.class_member()
        self.expect_punct("}")

    def type_parameters(self) -> None:
        self.expect_punct("<")
        while True:
            name = self.expect_ident().text
            self.emit("typevar", name)
            if self.at_keyword("extends"):
                self.advance()
                self.parse_type()
                while self.at_punct("&"):
                    self.advance()
                    self.parse_type()
            if self.at_punct(","):
                self.advance()
                continue
            self.expect_punct(">")
            return

    def class_body(self) -> None:
        self.expect_punct("{")
        while not self.at_punct("}"):
            self.class_member()
        self.expect_punct("}")

    def class_member(self) -> None:
        if self.at_punct(";"):
            self.advance()
            return
        mark = self.mark()
        mods = self.modifiers_and_annotations()
        if self.at_keyword("class") or self.at_keyword("interface") or self.at_keyword("enum") or (
            self.at_punct("@") and self.at_keyword("interface", 1)
        ):
            self.rewind(mark)
            self.type_decl()
            return
        if self.at_punct("{"):  # static or instance initializer
            self.block()
            return
        if self.at_punct("<"):
            self.type_parameters()
        # constructor: Name ( ... )
        if self.at_ident() and self.at_punct("(", 1):
            name = self.expect_ident().text
            params = self.parameters()
            throws = self.throws_clause()
            self.emit(
                "method",
                MethodInfo(name, mods, None, 0, tuple(params), tuple(throws), True),
            )
            self.block()
            return
        base, dims = self.parse_type(allow_void=True)
        if self.at_ident() and self.at_punct("(", 1):
            name = self.expect_ident().text
            params = self.parameters()
            extra_dims = 0
            while self.at_punct("["):
                self.advance()
                self.expect_punct("]")
                extra_dims += 1
            throws = self.throws_clause()
            self.emit(
                "method",
                MethodInfo(
                    name, mods, base, dims + extra_dims, tuple(params), tuple(throws), False
                ),
            )
            if self.at_punct(";"):
                self.advance()
            elif self.at_keyword("default"):
                # annotation-type member default value
                self.advance()
                self.expression()
                self.expect_punct(";")
            else:
                self.block()
            return
        # field declaration
        self.variable_declarators()
        self.expect_punct(";")

    def parameters(self) -> list[Param]:
        self.expect_punct("(")
        params: list[Param] = []
        if not self.at_punct(")"):
            while True:
                while self.at_punct("@"):
                    self.annotation()
                if self.at_keyword("final"):
                    self.advance()
                    while self.at_punct("@"):
                        self.annotation()
                base, dims = self.parse_type()
                varargs = False
                if self.at_punct("..."):
                    self.advance()
                    varargs = True
                name = self.expect_ident().text
                while self.at_punct("["):
                    self.advance()
                    self.expect_punct("]")
                    dims += 1
                params.append(Param(base, dims, varargs, name))
                if self.at_punct(","):
                    self.advance()
                    continue
                break
        self.expect_punct(")")
        return params

    def throws_clause(self) -> list[str]:
        names: list[str] = []
        if self.at_keyword("throws"):
            self.advance()
            while True:
                segments = self.type_name_segments()
                names.append(".".join(segments))
                if self.at_punct(","):
                    self.advance()
                    continue
                break
        return names

    # -- types ----------------------------------------------------------------

    def parse_type(self, allow_void: bool = False) -> tuple[str, int]:
        """Parse a type; returns (base name, array dims)."""
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in PRIMITIVES:
            self.advance()
            base = tok.text
        elif allow_void and self.at_keyword("void"):
            self.advance()
            base = "void"
        else:
            segments = self.type_name_segments()
            base = ".".join(segments)
        dims = 0
        while self.at_punct("["):
            if not self.at_punct("]", 1):
                break
            self.advance()
            self.advance()
            dims += 1
        return base, dims

    def type_name_segments(self) -> list[str]:
        segments = [self.expect_ident().text]
        if self.at_punct("<"):
            self.type_arguments()
        while self.at_punct(".") and self.at_ident(1):
            self.advance()
            segments.append(self.expect_ident().text)
            if self.at_punct("<"):
                self.type_arguments()
        self.register_type_use(segments)
        return segments

    def type_arguments(self) -> None:
        self.expect_punct("<")
        if self.at_punct(">"):  # diamond
            self.advance()
            return
        while True:
            if self.at_punct("?"):
                self.advance()
                if self.at_keyword("extends") or self.at_keyword("super"):
                    self.advance()
                    self.parse_type()
            else:
                self.parse_type()
            if self.at_punct(","):
                self.advance()
                continue
            self.expect_punct(">")
            return

    # -- statements ---------------------------------------------------------------

    def block(self) -> None:
        self.expect_punct("{")
        while not self.at_punct("}"):
            self.statement()
        self.expect_punct("}")

    def statement(self) -> None:
        tok = self.peek()
        if tok.kind == "punct":
            if tok.text == "{":
                self.block()
                return
            if tok.text == ";":
                self.advance()
                return
            if tok.text == "@":
                # annotated local declaration or local class
                mark = self.mark()
                self.modifiers_and_annotations()
                if self.at_keyword("class") or self.at_keyword("enum"):
                    self.rewind(mark)
                    self.type_decl()
                    return
                ok, _ = self.try_parse(self.local_declaration_rest)
                if ok:
                    return
                self.rewind(mark)
                self.fail("bad annotated statement")
        if tok.kind == "keyword":
            text = tok.text
            if text in ("class", "interface", "enum"):
                self.type_decl()
                return
            if text in ("final", "abstract", "static"):
                self.modifiers_and_annotations()
                if self.at_keyword("class") or self.at_keyword("interface") or self.at_keyword("enum"):
                    self.class_like_after_mods()
                    return
                self.local_declaration_rest()
                return
            if text in _STATEMENT_KEYWORDS:
                getattr(self, f"stmt_{text}")()
                return
        # labeled statement
        if tok.kind == "ident" and self.at_punct(":", 1):
            self.advance()
            self.advance()
            self.statement()
            return
        # local declaration vs expression statement
        ok, _ = self.try_parse(self.local_declaration_rest)
        if ok:
            return
        self.expression()
        self.expect_punct(";")

    def class_like_after_mods(self) -> None:
        if self.at_keyword("class") or self.at_keyword("interface"):
            self.class_or_interface_decl()
        else:
            self.enum_decl()

    def local_declaration_rest(self) -> None:
        """Parse a local variable declaration starting at the type."""
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in PRIMITIVES:
            pass
        elif tok.kind != "ident":
            self.fail("not a declaration")
        self.parse_type()
        if not self.at_ident():
            self.fail("not a declaration")
        self.variable_declarators()
        self.expect_punct(";")

    def variable_declarators(self) -> None:
        while True:
            self.expect_ident()
            while self.at_punct("["):
                self.advance()
                self.expect_punct("]")
            if self.at_punct("="):
                self.advance()
                self.variable_initializer()
            if self.at_punct(","):
                self.advance()
                continue
            return

    def variable_initializer(self) -> None:
        if self.at_punct("{"):
            self.array_initializer()
        else:
            self.expression()

    def array_initializer(self) -> None:
        self.expect_punct("{")
        while not self.at_punct("}"):
            self.variable_initializer()
            if self.at_punct(","):
                self.advance()
        self.expect_punct("}")

    # individual statement forms -------------------------------------------------

    def stmt_if(self) -> None:
        self.expect_keyword("if")
        self.expect_punct("(")
        self.expression()
        self.expect_punct(")")
        self.statement()
        if self.at_keyword("else"):
            self.advance()
            self.statement()

    def stmt_while(self) -> None:
        self.expect_keyword("while")
        self.expect_punct("(")
        self.expression()
        self.expect_punct(")")
        self.statement()

    def stmt_do(self) -> None:
        self.expect_keyword("do")
        self.statement()
        self.expect_keyword("while")
        self.expect_punct("(")
        self.expression()
        self.expect_punct(")")
        self.expect_punct(";")

    def stmt_for(self) -> None:
        self.expect_keyword("for")
        self.expect_punct("(")
        ok, _ = self.try_parse(self._foreach_control)
        if not ok:
            if not self.at_punct(";"):
                ok, _ = self.try_parse(self._for_init_declaration)
                if not ok:
                    self.expression_list()
            self.expect_punct(";")
            if not self.at_punct(";"):
                self.expression()
            self.expect_punct(";")
            if not self.at_punct(")"):
                self.expression_list()
        self.expect_punct(")")
        self.statement()

    def _foreach_control(self) -> None:
        if self.at_keyword("final"):
            self.advance()
        self.parse_type()
        self.expect_ident()
        while self.at_punct("["):
            self.advance()
            self.expect_punct("]")
        self.expect_punct(":")
        self.expression()
        if not self.at_punct(")"):
            self.fail("not a for-each header")

    def _for_init_declaration(self) -> None:
        if self.at_keyword("final"):
            self.advance()
        self.parse_type()
        if not self.at_ident():
            self.fail("not a declaration")
        self.variable_declarators()
        if not self.at_punct(";"):
            self.fail("not a for-init declaration")

    def stmt_switch(self) -> None:
        self.expect_keyword("switch")
        self.expect_punct("(")
        self.expression()
        self.expect_punct(")")
        self.expect_punct("{")
        while not self.at_punct("}"):
            if self.at_keyword("case"):
                self.advance()
                self.expression()
                self.expect_punct(":")
            elif self.at_keyword("default"):
                self.advance()
                self.expect_punct(":")
            else:
                self.statement()
        self.expect_punct("}")

    def stmt_try(self) -> None:
        self.expect_keyword("try")
        if self.at_punct("("):
            self.advance()
            while True:
                if self.at_keyword("final"):
                    self.advance()
                self.parse_type()
                self.expect_ident()
                self.expect_punct("=")
                self.expression()
                if self.at_punct(";"):
                    self.advance()
                    if self.at_punct(")"):
                        break
                    continue
                break
            self.expect_punct(")")
        self.block()
        catches = 0
        while self.at_keyword("catch"):
            self.advance()
            self.expect_punct("(")
            if self.at_keyword("final"):
                self.advance()
            self.parse_type()
            while self.at_punct("|"):
                self.advance()
                self.parse_type()
            self.expect_ident()
            self.expect_punct(")")
            self.block()
            catches += 1
        if self.at_keyword("finally"):
            self.advance()
            self.block()
        elif catches == 0:
            self.fail("try needs catch or finally")
        if catches:
            self.emit("try")

    def stmt_return(self) -> None:
        self.expect_keyword("return")
        if not self.at_punct(";"):
            self.expression()
        self.expect_punct(";")

    def stmt_throw(self) -> None:
        self.expect_keyword("throw")
        self.expression()
        self.expect_punct(";")

    def stmt_break(self) -> None:
        self.expect_keyword("break")
        if self.at_ident():
            self.advance()
        self.expect_punct(";")

    def stmt_continue(self) -> None:
        self.expect_keyword("continue")
        if self.at_ident():
            self.advance()
        self.expect_punct(";")

    def stmt_synchronized(self) -> None:
        self.expect_keyword("synchronized")
        self.expect_punct("(")
        self.expression()
        self.expect_punct(")")
        self.block()

    def stmt_assert(self) -> None:
        self.expect_keyword("assert")
        self.expression()
        if self.at_punct(":"):
            self.advance()
            self.expression()
        self.expect_punct(";")

    # -- expressions -----------------------------------------------------------------

    def expression_list(self) -> None:
        self.expression()
        while self.at_punct(","):
            self.advance()
            self.expression()

    def expression(self) -> None:
        self.assignment()

    def assignment(self) -> None:
        ok, _ = self.try_parse(self.lambda_expression)
        if ok:
            return
        self.ternary()
        tok = self.peek()
        if tok.kind == "punct" and tok.text in _ASSIGN_OPS:
            self.advance()
            self.assignment()
        elif self.at_punct(">") and self._greater_run_is_assignment():
            self._consume_greater_run()
            self.assignment()

    def _greater_run_is_assignment(self) -> bool:
        # adjacent '>>=' or '>>>=' spelled as single '>' tokens plus '='
        j = self.i
        toks = self.tokens
        while toks[j].kind == "punct" and toks[j].text == ">":
            nxt = toks[j + 1]
            if nxt.pos != toks[j].end:
                return False
            if nxt.kind == "punct" and nxt.text == "=":
                return True
            if not (nxt.kind == "punct" and nxt.text == ">"):
                return False
            j += 1
        return False

    def _consume_greater_run(self) -> None:
        while self.at_punct(">"):
            self.advance()
        self.expect_punct("=")

    def lambda_expression(self) -> None:
        if self.at_ident() and self.at_punct("->", 1):
            self.advance()
            self.advance()
            self.lambda_body()
            return
        if not self.at_punct("("):
            self.fail("not a lambda")
        mark = self.mark()
        self.skip_balanced("(", ")")
        if not self.at_punct("->"):
            self.rewind(mark)
            self.fail("not a lambda")
        self.rewind(mark)
        self.advance()  # (
        if not self.at_punct(")"):
            while True:
                if self.at_keyword("final"):
                    self.advance()
                # optionally typed parameter
                ok, _ = self.try_parse(self._typed_lambda_param)
                if not ok:
                    self.expect_ident()
                if self.at_punct(","):
                    self.advance()
                    continue
                break
        self.expect_punct(")")
        self.expect_punct("->")
        self.lambda_body()

    def _typed_lambda_param(self) -> None:
        self.parse_type()
        self.expect_ident()

    def lambda_body(self) -> None:
        if self.at_punct("{"):
            self.block()
        else:
            self.expression()

    def ternary(self) -> None:
        self.binary(0)
        if self.at_punct("?"):
            self.advance()
            self.expression()
            self.expect_punct(":")
            self.ternary()

    def binary(self, level: int) -> None:
        if level >= len(_BINARY_LEVELS):
            self.unary()
            return
        ops = _BINARY_LEVELS[level]
        self.binary(level + 1)
        while True:
            tok = self.peek()
            if tok.kind == "keyword" and tok.text == "instanceof" and "instanceof" in ops:
                self.advance()
                self.parse_type()
                continue
            if tok.kind == "punct" and tok.text in ops and tok.text != ">":
                self.advance()
                self.binary(level + 1)
                continue
            # assemble >, >=, >>, >>> from adjacent '>' tokens at the
            # relational level so generics stay parseable
            if tok.kind == "punct" and tok.text == ">" and "<" in ops:
                if self._greater_run_is_assignment():
                    return
                self.advance()
                nxt = self.peek()
                while (
                    nxt.kind == "punct"
                    and nxt.text in (">", "=")
                    and nxt.pos == self.tokens[self.i - 1].end
                ):
                    consumed = self.advance()
                    if consumed.text == "=":
                        break
                    nxt = self.peek()
                self.binary(level + 1)
                continue
            return

    def unary(self) -> None:
        tok = self.peek()
        if tok.kind == "punct" and tok.text in ("+", "-", "!", "~", "++", "--"):
            self.advance()
            self.unary()
            return
        if tok.kind == "punct" and tok.text == "(":
            ok, _ = self.try_parse(self._cast_expression)
            if ok:
                return
        self.postfix()

    def _cast_expression(self) -> None:
        self.expect_punct("(")
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in PRIMITIVES:
            self.parse_type()
        elif tok.kind == "ident":
            self.parse_type()
            while self.at_punct("&"):  # intersection cast
                self.advance()
                self.parse_type()
        else:
            self.fail("not a cast")
        self.expect_punct(")")
        ok, _ = self.try_parse(self.lambda_expression)  # casted lambda / method ref
        if ok:
            return
        nxt = self.peek()
        if nxt.kind in ("ident", "num", "str", "char"):
            self.unary()
            return
        if nxt.kind == "keyword" and nxt.text in ("new", "this", "super", "true", "false", "null"):
            self.unary()
            return
        if nxt.kind == "punct" and nxt.text in ("(", "!", "~"):
            self.unary()
            return
        self.fail("not a cast")

    def postfix(self) -> None:
        self.primary()
        while True:
            if self.at_punct("."):
                self.advance()
                if self.at_keyword("new"):
                    self.advance()
                    self.expect_ident()
                    self.arguments()
                    continue
                if self.at_keyword("this") or self.at_keyword("class") or self.at_keyword("super"):
                    self.advance()
                    continue
                if self.at_punct("<"):
                    self.type_arguments()
                self.expect_ident()
                if self.at_punct("("):
                    self.arguments()
                continue
            if self.at_punct("::"):
                self.advance()
                if self.at_keyword("new"):
                    self.advance()
                else:
                    self.expect_ident()
                continue
            if self.at_punct("["):
                self.advance()
                self.expression()
                self.expect_punct("]")
                continue
            if self.at_punct("++") or self.at_punct("--"):
                self.advance()
                continue
            return

    def arguments(self) -> None:
        self.expect_punct("(")
        if not self.at_punct(")"):
            self.expression_list()
        self.expect_punct(")")

    def primary(self) -> None:
        tok = self.peek()
        if tok.kind in ("num", "str", "char"):
            self.advance()
            return
        if tok.kind == "keyword":
            if tok.text in ("true", "false", "null"):
                self.advance()
                return
            if tok.text == "this":
                self.advance()
                if self.at_punct("("):
                    self.arguments()
                return
            if tok.text == "super":
                self.advance()
                if self.at_punct("("):
                    self.arguments()
                    return
                if self.at_punct("."):
                    return  # handled by postfix
                return
            if tok.text == "new":
                self.creator()
                return
            if tok.text in PRIMITIVES or tok.text == "void":
                # class literal: int.class, int[].class, void.class
                self.advance()
                while self.at_punct("[") and self.at_punct("]", 1):
                    self.advance()
                    self.advance()
                if self.at_punct(".") and self.at_keyword("class", 1):
                    self.advance()
                    self.advance()
                    return
                self.fail("primitive type in expression position")
            self.fail(f"unexpected keyword {tok.text!r}")
        if tok.kind == "ident":
            name = self.advance().text
            if self.at_punct("("):
                self.arguments()
            elif name[:1].isupper() and self.at_punct(".") and (
                self.at_ident(1) or self.at_keyword("class", 1) or self.at_punct("<", 1)
            ):
                # capitalized head of a qualified expression: a likely static
                # access such as Head.member or Head.member(...)
                self.emit("ref", name)
                if self.at_ident(1):
                    member = self.peek(1).text
                    if self.at_punct("(", 2):
                        self.emit("static_call", f"{name}.{member}")
            return
        if tok.kind == "punct" and tok.text == "(":
            self.advance()
            self.expression()
            self.expect_punct(")")
            return
        self.fail(f"unexpected token {tok.text!r}")

    def creator(self) -> None:
        self.expect_keyword("new")
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in PRIMITIVES:
            self.advance()
            base = tok.text
            is_class_type = False
        else:
            segments = self.type_name_segments()
            base = segments[-1] if len(segments) > 1 else segments[0]
            is_class_type = True
        if self.at_punct("("):
            if not is_class_type:
                self.fail("cannot instantiate a primitive")
            self.arguments()
            if is_class_type and base[:1].isupper():
                self.emit("ctor_call", base)
            if self.at_punct("{"):  # anonymous class body
                self.class_body()
            return
        if self.at_punct("["):
            dims_with_size = 0
            while self.at_punct("["):
                self.advance()
                if not self.at_punct("]"):
                    self.expression()
                    dims_with_size += 1
                self.expect_punct("]")
            if self.at_punct("{"):
                self.array_initializer()
            elif dims_with_size == 0:
                self.fail("array creator needs a size or an initializer")
            return
        self.fail("malformed creator expression")
