import numpy as np
import pytest

from reprolens.analyzer import bundled_checker_config
from reprolens.dataset import (
    IRREPRODUCIBLE,
    REPRODUCIBLE,
    Dataset,
)


@pytest.fixture(scope="session")
def checker():
    """Compiler config pinned to the bundled reference backend, so results
    do not depend on whether a JDK happens to be installed."""
    return bundled_checker_config()


def random_dataset(rng: np.random.Generator, n_repro: int, n_irrepro: int) -> Dataset:
    """A structurally valid random dataset (used by fold/SMOTE properties)."""
    n = n_repro + n_irrepro
    loc = rng.integers(1, 120, n).astype(float)
    bools = (rng.random((n, 5)) < rng.random(5)).astype(float)
    tris = rng.integers(-1, 2, (n, 3)).astype(float)
    X = np.column_stack([loc, bools, tris])
    X[:, 5] = np.minimum(X[:, 5], X[:, 4])  # compilable => parsable
    X[:, 1] = np.maximum(X[:, 1], X[:, 2])  # main => method
    y = np.concatenate(
        [np.full(n_repro, REPRODUCIBLE), np.full(n_irrepro, IRREPRODUCIBLE)]
    )
    perm = rng.permutation(n)
    return Dataset(X[perm], y[perm])
