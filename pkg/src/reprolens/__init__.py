"""reprolens: predict and explain the reproducibility of snippet-reported issues.

Pipeline: ingest Q&A post dumps, extract code blocks, analyze snippet
structure into nine features, train and cross-validate classifiers over
SMOTE-rebalanced data, explain predictions with exact Shapley values, and
validate feature significance with chi-square tests. Exposed as a library,
a CLI (``reprolens``), and an HTTP analysis service.
"""

__version__ = "0.1.0"
