"""Turn structural facts into the three tri-state features and the full vector.

Tri-state semantics: -1 a required element is absent, 0 not needed or
undecidable, +1 present/handled. When both the +1 and -1 conditions of an
import feature hold, -1 wins: a missing requirement dominates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import EmptySnippet
from .compile import CompileResult, CompileStatus, CompilerConfig, check_compilability
from .features import FeatureVector
from .jdk import JdkIndex, load_index
from .structure import StructuralSummary, analyze_structure, count_loc

_EXCEPTION_TOKEN = re.compile(r"\w+Exception\b|\w+Error\b")


def _explicitly_imported(imports: tuple[str, ...], name: str) -> bool:
    return any(imp == name or imp.endswith("." + name) for imp in imports)


def _any_wildcard(imports: tuple[str, ...]) -> bool:
    return any(imp.endswith(".*") for imp in imports)


def classify_imports(summary: StructuralSummary, index: JdkIndex) -> tuple[int, int]:
    """(native_import, external_import) tri-states for one snippet."""
    imports = summary.imports
    wildcard = _any_wildcard(imports)

    missing_jdk = False
    unresolved_external = False
    for name in summary.referenced_types:
        if name in summary.defined_types:
            continue
        if _explicitly_imported(imports, name) or wildcard:
            continue
        if index.needs_import(name):
            missing_jdk = True
        elif not index.knows_class(name):
            unresolved_external = True

    has_native = any(index.is_native_import(imp) for imp in imports)
    has_external = any(not index.is_native_import(imp) for imp in imports)

    native = -1 if missing_jdk else (1 if has_native else 0)
    external = -1 if unresolved_external else (1 if has_external else 0)
    return native, external


def assess_exception_handling(summary: StructuralSummary, question_text: str = "") -> int:
    """Tri-state for exception handling, using the question text as context.

    A question that names an exception class counts as +1: the reported
    issue itself is about the exception, so nothing is "unhandled".
    """
    if summary.try_catch_count >= 1 or summary.throws_declared:
        return 1
    if question_text and _EXCEPTION_TOKEN.search(question_text):
        return 1
    index = load_index()
    for callee in summary.constructor_calls | summary.static_calls:
        if index.thrown_checked_exception(callee):
            return -1
    return 0


@dataclass
class AnalysisOutcome:
    """Everything one snippet analysis produced, for callers that need more
    than the bare vector (the service surfaces compile provenance and the
    structural summary for hint rules)."""

    features: FeatureVector
    summary: StructuralSummary
    compile_result: CompileResult
    notes: list[str] = field(default_factory=list)


def analyze_snippet(
    snippet: str,
    question_text: str = "",
    compiler: CompilerConfig | None = None,
    index: JdkIndex | None = None,
) -> AnalysisOutcome:
    """Full analysis: structure, compile probe, tri-states, feature vector."""
    loc = count_loc(snippet)
    if loc == 0:
        raise EmptySnippet("snippet has no non-blank lines")
    index = index or load_index()
    summary = analyze_structure(snippet)
    compile_result = check_compilability(snippet, compiler, summary=summary)

    notes: list[str] = []
    if compile_result.status is CompileStatus.UNAVAILABLE:
        notes.append("compiler unavailable; compilable recorded as false")
    if compile_result.status is CompileStatus.TIMEOUT:
        notes.append("compiler timed out; compilable recorded as false")
    compilable = compile_result.ok and summary.parse_ok
    if compile_result.ok and not summary.parse_ok:
        # keep the pinned "compilable implies parsable" invariant; the raw
        # compiler verdict stays visible in compile_result
        notes.append("compiler accepted a form outside the structural grammar")

    native, external = classify_imports(summary, index)
    features = FeatureVector(
        loc=loc,
        has_method=summary.method_count >= 1,
        has_main=summary.has_main,
        has_class=summary.class_count >= 1,
        parsable=summary.parse_ok,
        compilable=compilable,
        native_import=native,
        external_import=external,
        exception_handling=assess_exception_handling(summary, question_text),
    )
    return AnalysisOutcome(features, summary, compile_result, notes)


def extract_features(
    snippet: str,
    question_text: str = "",
    compiler: CompilerConfig | None = None,
) -> FeatureVector:
    """The nine-feature vector for one snippet; deterministic given config."""
    return analyze_snippet(snippet, question_text, compiler).features
