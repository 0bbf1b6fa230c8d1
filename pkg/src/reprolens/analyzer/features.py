"""The nine-feature vector extracted from a code snippet.

The vector is the pivot type of the whole toolkit: the analyzer produces it,
datasets encode it, models consume it and explanations attribute back onto it.
Feature order is fixed and documented by FEATURE_NAMES; changing it is a
schema break.
"""

from __future__ import annotations

from dataclasses import dataclass

FEATURE_NAMES: tuple[str, ...] = (
    "loc",
    "has_method",
    "has_main",
    "has_class",
    "parsable",
    "compilable",
    "native_import",
    "external_import",
    "exception_handling",
)

N_FEATURES = len(FEATURE_NAMES)

TRI_STATE_VALUES = (-1, 0, 1)


@dataclass(frozen=True)
class FeatureVector:
    """Nine structural features of one snippet.

    The last three are tri-states: -1 means a required element is absent,
    0 means not needed or undecidable, +1 means present/handled.
    """

    loc: int
    has_method: bool
    has_main: bool
    has_class: bool
    parsable: bool
    compilable: bool
    native_import: int
    external_import: int
    exception_handling: int

    def __post_init__(self) -> None:
        if self.loc < 1:
            raise ValueError(f"loc must be >= 1, got {self.loc}")
        for name in ("native_import", "external_import", "exception_handling"):
            value = getattr(self, name)
            if value not in TRI_STATE_VALUES:
                raise ValueError(f"{name} must be one of {TRI_STATE_VALUES}, got {value}")
        if self.compilable and not self.parsable:
            raise ValueError("compilable implies parsable")

    def as_dict(self) -> dict[str, int | bool]:
        return {name: getattr(self, name) for name in FEATURE_NAMES}
