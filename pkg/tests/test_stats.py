import math

import mpmath
import numpy as np
import pytest

from reprolens.dataset import Dataset, IRREPRODUCIBLE, REPRODUCIBLE
from reprolens.errors import StatsError
from reprolens.stats import (
    ContingencyTable,
    borda_count,
    chi_square,
    chi_square_sf,
    contingency,
    feature_impact_report,
)

# Reconstructed 2x2 tables: per-class feature rates applied to the 270/87
# class sizes and rounded. Compilability: round(.311*270)=84, round(.011*87)=1.
COMPILABILITY_TABLE = ContingencyTable(
    ("true", "false"), ("Reproducible", "Irreproducible"), ((84, 1), (186, 86))
)
MAIN_TABLE = ContingencyTable(
    ("true", "false"), ("Reproducible", "Irreproducible"), ((148, 18), (122, 69))
)


def yates_oracle(counts) -> float:
    """Straight-from-the-formula Yates statistic, independent of stats.py."""
    obs = np.asarray(counts, dtype=float)
    total = obs.sum()
    chi2 = 0.0
    for i in range(obs.shape[0]):
        for j in range(obs.shape[1]):
            expected = obs[i].sum() * obs[:, j].sum() / total
            chi2 += max(abs(obs[i, j] - expected) - 0.5, 0.0) ** 2 / expected
    return chi2


class TestChiSquareSf:
    def test_zero_statistic_is_one(self):
        for df in (1, 2, 5, 9):
            assert chi_square_sf(0.0, df) == 1.0

    def test_df2_closed_form(self):
        # df=2 survival is exactly exp(-x/2)
        for x in (0.1, 0.7, 4.7, 6.4, 30.0):
            assert chi_square_sf(x, 2) == math.exp(-x / 2)

    def test_df2_matches_reported_p_values(self):
        # reported (statistic, p) pairs round-trip to two decimals
        for x, reported in ((6.4, 0.04), (0.7, 0.71), (4.7, 0.09)):
            assert abs(chi_square_sf(x, 2) - reported) <= 0.01

    def test_df1_is_erfc(self):
        for x in (0.5, 3.8, 30.9):
            assert chi_square_sf(x, 1) == pytest.approx(math.erfc(math.sqrt(x / 2)), abs=1e-15)

    def test_against_incomplete_gamma_oracle(self):
        # independent evaluation of Q(df/2, x/2) via mpmath
        mpmath.mp.dps = 30
        for df in range(1, 11):
            for x in np.linspace(0.01, 100, 23):
                expected = float(
                    mpmath.gammainc(df / 2, x / 2, mpmath.inf, regularized=True)
                )
                assert abs(chi_square_sf(float(x), df) - expected) < 1e-10

    def test_monotone_non_increasing(self):
        for df in (1, 2, 3, 7):
            values = [chi_square_sf(x, df) for x in np.linspace(0, 50, 200)]
            assert all(a >= b for a, b in zip(values, values[1:]))

    def test_rejects_bad_inputs(self):
        with pytest.raises(StatsError):
            chi_square_sf(-1.0, 2)
        with pytest.raises(StatsError):
            chi_square_sf(1.0, 0)


class TestChiSquare:
    def test_compilability_reconstruction(self):
        result = chi_square(COMPILABILITY_TABLE)
        assert result.yates_applied
        assert result.chi2 == pytest.approx(yates_oracle(COMPILABILITY_TABLE.counts), rel=1e-12)
        assert abs(result.chi2 - 30.9) <= 0.3
        assert 2.67e-9 < result.p < 2.67e-7  # one order of magnitude around 2.67e-08
        assert result.df == 1

    def test_main_method_reconstruction(self):
        result = chi_square(MAIN_TABLE)
        assert abs(result.chi2 - 28.8) <= 1.6

    def test_proportional_table_is_independent(self):
        t = ContingencyTable(("a", "b"), ("x", "y"), ((10, 10), (10, 10)))
        result = chi_square(t, yates=False)
        assert result.chi2 == 0.0
        assert result.p == 1.0

    def test_row_and_column_swap_invariance(self):
        base = chi_square(COMPILABILITY_TABLE)
        swapped_rows = ContingencyTable(
            ("false", "true"), ("Reproducible", "Irreproducible"), ((186, 86), (84, 1))
        )
        swapped_cols = ContingencyTable(
            ("true", "false"), ("Irreproducible", "Reproducible"), ((1, 84), (86, 186))
        )
        for variant in (swapped_rows, swapped_cols):
            result = chi_square(variant)
            assert result.chi2 == pytest.approx(base.chi2, rel=1e-12)
            assert result.df == base.df
            assert result.p == pytest.approx(base.p, rel=1e-9)

    def test_count_scaling_multiplies_uncorrected_statistic(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            counts = rng.integers(1, 40, (2, 2))
            base = chi_square(ContingencyTable(("a", "b"), ("x", "y"), tuple(map(tuple, counts))), yates=False)
            m = int(rng.integers(2, 7))
            scaled = chi_square(
                ContingencyTable(("a", "b"), ("x", "y"), tuple(map(tuple, counts * m))),
                yates=False,
            )
            assert scaled.chi2 == pytest.approx(m * base.chi2, rel=1e-9)
            if base.chi2 > 0:
                assert scaled.p <= base.p + 1e-12

    def test_df_above_one_uses_plain_statistic(self):
        t = ContingencyTable(("a", "b", "c"), ("x", "y"), ((5, 9), (8, 3), (7, 7)))
        result = chi_square(t)
        assert not result.yates_applied
        assert result.df == 2

    def test_structural_violations_rejected(self):
        with pytest.raises(StatsError):
            ContingencyTable(("a",), ("x", "y"), ((1, 2),))
        with pytest.raises(StatsError):
            ContingencyTable(("a", "b"), ("x", "y"), ((0, 0), (1, 2)))
        with pytest.raises(StatsError):
            ContingencyTable(("a", "b"), ("x", "y"), ((1, 0), (2, 0)))


def reconstructed_dataset() -> Dataset:
    """A 357-example dataset realizing the reconstructed per-feature counts:
    84/1 compilable, 148/18 main (each feature independent column-wise)."""
    n_r, n_i = 270, 87
    n = n_r + n_i
    X = np.zeros((n, 9))
    X[:, 0] = 5.0 + (np.arange(n) % 40)  # varied LOC so all three bins appear
    y = np.concatenate([np.full(n_r, REPRODUCIBLE), np.full(n_i, IRREPRODUCIBLE)])

    def fill(col: int, true_r: int, true_i: int) -> None:
        X[:true_r, col] = 1.0
        X[n_r : n_r + true_i, col] = 1.0

    fill(4, 137, 33)  # parsable: round(.507*270), round(.379*87)
    fill(5, 84, 1)  # compilable (within the parsable block: 84<=137, 1<=33)
    fill(2, 148, 18)  # main
    fill(1, 181, 48)  # method: round(.67*270), round(.55*87); main block within
    fill(3, 146, 34)  # class
    for col in (6, 7, 8):  # tri-states: all three values present per class
        X[: n_r // 3, col] = 1.0
        X[n_r // 3 : n_r // 2, col] = -1.0
        X[n_r : n_r + n_i // 3, col] = 1.0
        X[n_r + n_i // 3 : n_r + n_i // 2, col] = -1.0
    return Dataset(X, y)


class TestContingency:
    def test_compilability_counts(self):
        table = contingency(reconstructed_dataset(), "compilable")
        assert table.counts == ((84, 1), (186, 86))

    def test_main_counts(self):
        table = contingency(reconstructed_dataset(), "has_main")
        assert table.counts == ((148, 18), (122, 69))

    def test_loc_is_binned_in_three_rows(self):
        rng = np.random.default_rng(0)
        ds = Dataset(
            np.column_stack(
                [rng.integers(1, 90, 60).astype(float), np.zeros((60, 8))]
            ),
            rng.integers(0, 2, 60),
        )
        table = contingency(ds, "loc")
        assert table.row_labels == ("short", "medium", "long")

    def test_single_class_rejected(self):
        X = np.ones((10, 9))
        X[:, 6:] = 0
        ds = Dataset(X, np.full(10, REPRODUCIBLE))
        with pytest.raises(StatsError):
            contingency(ds, "has_main")

    def test_unknown_feature_rejected(self):
        with pytest.raises(StatsError):
            contingency(reconstructed_dataset(), "loc2")

    def test_report_covers_all_nine(self):
        rows = feature_impact_report(reconstructed_dataset())
        assert [r["feature"] for r in rows] == [
            "loc", "has_method", "has_main", "has_class", "parsable",
            "compilable", "native_import", "external_import", "exception_handling",
        ]
        by_name = {r["feature"]: r for r in rows}
        assert abs(by_name["compilable"]["chi2"] - 30.9) <= 0.3
        assert by_name["compilable"]["significant"]


class TestBorda:
    def test_single_ranking(self):
        assert borda_count([["A", "B", "C"]]) == {"A": 3, "B": 2, "C": 1}

    def test_two_rankings_hand_sum(self):
        scores = borda_count([["A", "B", "C"], ["B", "A", "C"]])
        assert scores == {"A": 5, "B": 5, "C": 2}
        assert list(scores) == ["A", "B", "C"]  # tie broken alphabetically

    def test_empty_election(self):
        assert borda_count([]) == {}
        assert borda_count([], candidates=["X", "Y"]) == {"X": 0, "Y": 0}

    def test_duplicate_candidate_rejected(self):
        with pytest.raises(StatsError):
            borda_count([["A", "A"]])

    def test_over_length_ranking_rejected(self):
        with pytest.raises(StatsError):
            borda_count([["A", "B", "C", "D"]])

    def test_voter_order_invariance(self):
        rng = np.random.default_rng(3)
        candidates = list("ABCDEF")
        rankings = [
            list(rng.choice(candidates, size=rng.integers(1, 4), replace=False))
            for _ in range(40)
        ]
        base = borda_count(rankings, candidates)
        for _ in range(5):
            perm = [rankings[i] for i in rng.permutation(len(rankings))]
            assert borda_count(perm, candidates) == base
