"""Domain errors shared across the package.

Every error a caller is expected to handle derives from ReproLensError so the
CLI can map "domain error" to exit code 1 while genuine bugs still surface as
ordinary tracebacks.
"""


class ReproLensError(Exception):
    """Base class for all expected domain errors."""


class EmptySnippetSet(ReproLensError):
    """combine_snippets was called with no snippets."""


class EmptySnippet(ReproLensError):
    """A snippet had no non-blank lines left to analyze."""


class CompilerConfigError(ReproLensError):
    """The compiler scratch directory or command configuration is unusable."""


class SingleClassError(ReproLensError):
    """An operation needed both labels but the dataset contains only one."""


class TooFewMinorityError(ReproLensError):
    """SMOTE needs at least two minority examples to interpolate between."""


class FoldError(ReproLensError):
    """Cross-validation folding constraints were violated."""


class InvalidHyperparameters(ReproLensError):
    """A model spec failed its family-specific validation."""


class FeatureWidthError(ReproLensError):
    """An input vector did not have exactly nine features."""


class MetricsError(ReproLensError):
    """A confusion matrix was structurally unusable."""


class ExplainError(ReproLensError):
    """Shapley explanation preconditions were violated."""


class StatsError(ReproLensError):
    """A contingency table or ranking input was structurally invalid."""


class BundleError(ReproLensError):
    """A model bundle could not be loaded or failed its integrity checks."""


class DatasetError(ReproLensError):
    """A dataset file or in-memory dataset violated its schema."""
