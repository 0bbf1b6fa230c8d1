"""Challenge catalog (C1-C10) and the static rules mapping features to hints.

Hints are a pure function of the feature vector plus the structural summary,
so every response's hints can be recomputed from its own payload. Rules that
rest on heuristics rather than direct structural evidence are labeled
advisory. C6, C7, C9 and C10 need signals (database/file/UI usage,
deprecation data, environment text, sample I/O) this analyzer does not
extract, so no rule emits them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .analyzer.features import FeatureVector
from .analyzer.jdk import load_index
from .analyzer.structure import StructuralSummary

CHALLENGES: dict[str, str] = {
    "C1": "A class, interface or method the snippet relies on is not defined",
    "C2": "An important part of the code is missing",
    "C3": "A required external library cannot be identified",
    "C4": "An identifier or object type cannot be resolved",
    "C5": "The code snippet is too short",
    "C6": "The code depends on a database, file or UI not provided",
    "C7": "The code is outdated for the target platform",
    "C8": "The error log or stack trace is missing",
    "C9": "System or environment setup details are missing",
    "C10": "Sample input and output are missing",
}

SHORT_SNIPPET_LOC = 2


@dataclass(frozen=True)
class Hint:
    challenge_id: str
    message: str
    triggering_feature: str
    advisory: bool = False

    def as_dict(self) -> dict:
        return {
            "challenge_id": self.challenge_id,
            "message": self.message,
            "triggering_feature": self.triggering_feature,
            "advisory": self.advisory,
        }


def _unresolved_types(summary: StructuralSummary) -> list[str]:
    index = load_index()
    wildcard = any(imp.endswith(".*") for imp in summary.imports)
    out = []
    for name in sorted(summary.referenced_types):
        if name in summary.defined_types or index.knows_class(name) or wildcard:
            continue
        if any(imp == name or imp.endswith("." + name) for imp in summary.imports):
            continue
        out.append(name)
    return out


def derive_hints(
    features: FeatureVector,
    summary: StructuralSummary | None = None,
    question_text: str = "",
) -> list[Hint]:
    hints: list[Hint] = []

    if features.loc <= SHORT_SNIPPET_LOC:
        hints.append(
            Hint(
                "C5",
                f"Only {features.loc} line(s) of code: too little context to rebuild "
                "the failing program. Include the surrounding code.",
                "loc",
            )
        )

    if features.external_import == -1:
        names = _unresolved_types(summary) if summary else []
        detail = f" ({', '.join(names[:5])})" if names else ""
        hints.append(
            Hint(
                "C3",
                "Types are used that match no import and no JDK class"
                f"{detail}; add the import or name the library they come from.",
                "external_import",
            )
        )

    if summary is not None and summary.parse_ok:
        names = _unresolved_types(summary)
        if names:
            hints.append(
                Hint(
                    "C4",
                    f"Unresolved type name(s): {', '.join(names[:5])}. Declare them "
                    "or show where they come from.",
                    "external_import",
                )
            )

    if not features.has_class and not features.has_method:
        hints.append(
            Hint(
                "C1",
                "No class or method declaration: readers must reconstruct the "
                "enclosing structure to run this. Wrap the statements in the "
                "class/method they live in.",
                "has_class",
                advisory=True,
            )
        )
        hints.append(
            Hint(
                "C2",
                "Bare statements usually omit the setup that made the issue "
                "appear; include the declarations the statements rely on.",
                "has_method",
                advisory=True,
            )
        )

    if features.exception_handling == -1:
        hints.append(
            Hint(
                "C2",
                "A call that throws a checked exception has no try/catch or "
                "throws; the snippet cannot compile as given. Add the handling "
                "the original code had.",
                "exception_handling",
                advisory=True,
            )
        )

    if not features.compilable and question_text and not _mentions_failure(question_text):
        hints.append(
            Hint(
                "C8",
                "The code does not compile yet the question shows no error text; "
                "paste the exact compiler or runtime message.",
                "compilable",
                advisory=True,
            )
        )

    return hints


def _mentions_failure(question_text: str) -> bool:
    return bool(re.search(r"\w+Exception\b|\w+Error\b|error|exception", question_text))
