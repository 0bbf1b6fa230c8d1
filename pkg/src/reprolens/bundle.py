"""Model bundle: a trained model plus everything a server needs to analyze.

One JSON document holds the serialized model, the seeded background sample
for Shapley explanations, the keyword list used at ingestion time, and the
hash of the JDK index the analyzer ran with. Loaded once, immutable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analyzer.jdk import load_index
from .errors import BundleError
from .explain import background_sample
from .ingest import DEFAULT_KEYWORDS
from .models.base import TrainedModel
from .models.serialize import model_from_dict, model_to_dict

BUNDLE_VERSION = "1"


@dataclass
class ModelBundle:
    model: TrainedModel
    background: np.ndarray
    keywords: tuple[str, ...]
    jdk_index_sha256: str

    @property
    def fingerprint(self) -> str:
        return self.model.training_fingerprint

    def to_dict(self) -> dict:
        return {
            "bundle_version": BUNDLE_VERSION,
            "model": model_to_dict(self.model),
            "background": [[float(v) for v in row] for row in self.background],
            "keywords": list(self.keywords),
            "jdk_index_sha256": self.jdk_index_sha256,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelBundle":
        try:
            if d["bundle_version"] != BUNDLE_VERSION:
                raise BundleError(f"unsupported bundle version {d['bundle_version']!r}")
            background = np.array(d["background"], dtype=np.float64)
            if background.ndim != 2 or background.shape[0] == 0:
                raise BundleError("bundle background must be a non-empty matrix")
            return cls(
                model=model_from_dict(d["model"]),
                background=background,
                keywords=tuple(d["keywords"]),
                jdk_index_sha256=d["jdk_index_sha256"],
            )
        except KeyError as exc:
            raise BundleError(f"malformed bundle: missing {exc}") from None


def build_bundle(
    model: TrainedModel,
    train_X: np.ndarray,
    background_size: int = 100,
    seed: int = 0,
    keywords: tuple[str, ...] = DEFAULT_KEYWORDS,
) -> ModelBundle:
    return ModelBundle(
        model=model,
        background=background_sample(train_X, background_size, seed),
        keywords=keywords,
        jdk_index_sha256=load_index().sha256,
    )


def save_bundle(bundle: ModelBundle, path: str | Path) -> None:
    Path(path).write_text(json.dumps(bundle.to_dict(), sort_keys=True), encoding="utf-8")


def load_bundle(path: str | Path) -> ModelBundle:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleError(f"not a bundle file: {exc}") from None
    bundle = ModelBundle.from_dict(data)
    current = load_index().sha256
    if bundle.jdk_index_sha256 != current:
        raise BundleError(
            "bundle was built against a different JDK index "
            f"({bundle.jdk_index_sha256[:12]} != {current[:12]})"
        )
    return bundle
