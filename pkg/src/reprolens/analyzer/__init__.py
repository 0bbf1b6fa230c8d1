"""Structural analysis of Java snippet text into the nine-feature vector."""

from .classify import (
    AnalysisOutcome,
    analyze_snippet,
    assess_exception_handling,
    classify_imports,
    extract_features,
)
from .compile import (
    CompileResult,
    CompileStatus,
    CompilerConfig,
    Diagnostic,
    bundled_checker_config,
    check_compilability,
)
from .features import FEATURE_NAMES, N_FEATURES, FeatureVector
from .jdk import JdkIndex, load_index
from .structure import (
    StructuralSummary,
    WrapLevel,
    analyze_structure,
    best_source,
    check_parsability,
    count_loc,
)

__all__ = [
    "AnalysisOutcome",
    "CompileResult",
    "CompileStatus",
    "CompilerConfig",
    "Diagnostic",
    "FEATURE_NAMES",
    "N_FEATURES",
    "FeatureVector",
    "JdkIndex",
    "StructuralSummary",
    "WrapLevel",
    "analyze_snippet",
    "analyze_structure",
    "assess_exception_handling",
    "best_source",
    "bundled_checker_config",
    "check_compilability",
    "check_parsability",
    "classify_imports",
    "count_loc",
    "extract_features",
    "load_index",
]
