"""Staged structural analysis of snippet text.

A snippet is parsed in three stages, mirroring the dummy-class technique used
to salvage bare fragments: (1) as a complete compilation unit, (2) with the
statements wrapped in a synthetic method inside a synthetic class, (3) with
the members wrapped in a synthetic class only. The first stage that succeeds
decides the wrap level; the synthetic wrapper never contributes to counts,
imports, referenced types or LOC.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..errors import EmptySnippet
from .parse import MethodInfo, ParseFailure, ParseResult, parse_compilation_unit, split_import_header

WRAP_CLASS = "SnippetShell"
WRAP_METHOD = "snippetBody"


class WrapLevel(enum.Enum):
    NONE = "none"
    METHOD_WRAPPED = "method_wrapped"
    CLASS_WRAPPED = "class_wrapped"


@dataclass(frozen=True)
class StructuralSummary:
    parse_ok: bool
    wrap_level: WrapLevel
    class_count: int = 0
    method_count: int = 0
    has_main: bool = False
    imports: tuple[str, ...] = ()
    try_catch_count: int = 0
    throws_declared: bool = False
    referenced_types: frozenset[str] = frozenset()
    defined_types: frozenset[str] = frozenset()
    # extra structural facts used downstream: call sites for the
    # exception-handling assessment, the public type name for compile files
    constructor_calls: frozenset[str] = frozenset()
    static_calls: frozenset[str] = frozenset()
    public_type: str | None = None

    def __post_init__(self) -> None:
        if self.has_main and self.method_count < 1:
            raise ValueError("has_main implies at least one method")


def count_loc(text: str) -> int:
    """Number of lines containing at least one non-whitespace character."""
    return sum(1 for line in text.splitlines() if line.strip())


def build_wrapped(snippet: str, level: WrapLevel) -> str:
    """Return the snippet text at the given wrap level, imports hoisted."""
    if level is WrapLevel.NONE:
        return snippet
    header, rest = split_import_header(snippet)
    if header and not header.endswith("\n"):
        header += "\n"
    if level is WrapLevel.METHOD_WRAPPED:
        return f"{header}class {WRAP_CLASS} {{\nvoid {WRAP_METHOD}() {{\n{rest}\n}}\n}}\n"
    return f"{header}class {WRAP_CLASS} {{\n{rest}\n}}\n"


def _is_main_method(m: MethodInfo) -> bool:
    if m.is_constructor or m.name != "main":
        return False
    if not {"public", "static"} <= set(m.modifiers):
        return False
    if m.return_type != "void" or m.return_dims != 0:
        return False
    if len(m.params) != 1:
        return False
    p = m.params[0]
    if p.base_type.split(".")[-1] != "String":
        return False
    return (p.dims == 1 and not p.varargs) or (p.dims == 0 and p.varargs)


def _summarize(result: ParseResult, level: WrapLevel) -> StructuralSummary:
    types = list(result.types)
    methods = list(result.methods)
    if level is not WrapLevel.NONE:
        # the synthetic wrapper is the first declared type (and, when method
        # wrapping, the first parsed signature); drop it from the counts
        if types:
            types.pop(0)
        if level is WrapLevel.METHOD_WRAPPED and methods:
            methods.pop(0)
    user_methods = [m for m in methods if not m.is_constructor]
    return StructuralSummary(
        parse_ok=True,
        wrap_level=level,
        class_count=len(types),
        method_count=len(user_methods),
        has_main=any(_is_main_method(m) for m in user_methods),
        imports=tuple(result.imports),
        try_catch_count=result.try_catch_count,
        throws_declared=any(m.throws for m in methods),
        referenced_types=frozenset(result.referenced),
        defined_types=frozenset(types),
        constructor_calls=frozenset(result.constructor_calls),
        static_calls=frozenset(result.static_calls),
        public_type=result.public_types[0] if result.public_types else None,
    )


_FAILED = StructuralSummary(parse_ok=False, wrap_level=WrapLevel.NONE)


def analyze_structure(snippet: str) -> StructuralSummary:
    """Deterministic structural summary of a snippet; total over all inputs."""
    if count_loc(snippet) == 0:
        raise EmptySnippet("snippet has no non-blank lines")
    for level in (WrapLevel.NONE, WrapLevel.METHOD_WRAPPED, WrapLevel.CLASS_WRAPPED):
        try:
            result = parse_compilation_unit(build_wrapped(snippet, level))
        except ParseFailure:
            continue
        return _summarize(result, level)
    return _FAILED


def check_parsability(snippet: str) -> bool:
    return analyze_structure(snippet).parse_ok


def best_source(snippet: str, summary: StructuralSummary | None = None) -> str:
    """The best-parsing form of the snippet: wrapped if wrapping was needed."""
    if summary is None:
        summary = analyze_structure(snippet)
    if not summary.parse_ok:
        return snippet
    return build_wrapped(snippet, summary.wrap_level)
