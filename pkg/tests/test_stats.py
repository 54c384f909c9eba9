import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from irfs.dataset_io import from_arrays
from irfs.errors import EmptyInput, LengthMismatch, RangeError
from irfs.stats import (
    BinningSpec,
    describe,
    describe_columns,
    discretize,
    entropy,
    mi_relevance,
    mutual_info,
    pearson,
)

from oracles import describe_oracle, mi_from_table, mi_oracle, pearson_oracle

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


class TestDescribe:
    def test_constant(self):
        s = describe([1, 1, 1])
        assert s.mean == 1 and s.std == 0
        assert s.min == s.q25 == s.median == s.q75 == s.max == 1

    def test_two_points(self):
        s = describe([0, 10])
        assert (s.mean, s.min, s.max, s.median) == (5, 0, 10, 5)

    def test_matches_sort_oracle(self, rng):
        x = rng.standard_normal(1000) * 3 + 1
        np.testing.assert_allclose(describe(x), describe_oracle(x), rtol=0, atol=1e-12)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            describe([])

    def test_columns_agree_with_scalar(self, rng):
        M = rng.standard_normal((37, 5))
        M[:, 2] = 0.1
        out = describe_columns(M)
        for j in range(5):
            np.testing.assert_allclose(out[j], describe(M[:, j]), atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(arrays(np.float64, st.integers(1, 50), elements=finite))
    def test_order_invariant(self, x):
        s = describe(x)
        assert s.min <= s.q25 <= s.median <= s.q75 <= s.max
        assert s.std >= 0
        assert describe(x) == s


class TestPearson:
    def test_identity(self):
        assert pearson([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0, abs=1e-15)

    def test_negation(self):
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0, abs=1e-15)

    def test_constant_is_zero(self):
        assert pearson([1, 1, 1], [1, 2, 3]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            pearson([1, 2], [1, 2, 3])

    def test_matches_oracle(self, rng):
        for _ in range(20):
            x = rng.standard_normal(50)
            y = 0.3 * x + rng.standard_normal(50)
            assert pearson(x, y) == pytest.approx(pearson_oracle(x.tolist(), y.tolist()), abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 30).flatmap(lambda n: st.tuples(
        arrays(np.float64, n, elements=finite), arrays(np.float64, n, elements=finite))))
    def test_range(self, xy):
        assert abs(pearson(*xy)) <= 1 + 1e-12


class TestDiscretize:
    def test_median_split(self):
        assert discretize([1, 2, 3, 4], BinningSpec(2)).tolist() == [0, 0, 1, 1]

    def test_constant_column(self):
        assert discretize([5.0] * 7).tolist() == [0] * 7

    def test_uniform_counts(self, rng):
        x = rng.random(1000)
        ids = discretize(x, BinningSpec(10))
        # oracle: rank by sorting, consecutive blocks of 100
        ranks = np.empty(1000, dtype=int)
        ranks[np.argsort(x)] = np.arange(1000)
        counts = np.bincount(ids)
        assert counts.size == 10
        assert all(99 <= c <= 101 for c in counts)
        np.testing.assert_array_equal(ids, ranks // 100)

    def test_ties_collapse_bins(self):
        ids = discretize([0, 0, 0, 0, 0, 0, 1, 2], BinningSpec(4))
        assert ids.max() + 1 < 4
        assert sorted(set(ids.tolist())) == list(range(ids.max() + 1))

    def test_bad_bin_count(self):
        with pytest.raises(RangeError):
            BinningSpec(1)

    @settings(max_examples=100, deadline=None)
    @given(arrays(np.float64, st.integers(1, 80), elements=finite), st.integers(2, 12))
    def test_dense_and_monotone(self, x, bins):
        ids = discretize(x, BinningSpec(bins))
        assert ids.min() == 0
        assert sorted(set(ids.tolist())) == list(range(ids.max() + 1))
        order = np.argsort(x, kind="stable")
        assert np.all(np.diff(ids[order]) >= 0)


class TestMutualInfo:
    def test_perfect_dependence(self):
        assert mutual_info([0, 1, 0, 1], [0, 1, 0, 1]) == pytest.approx(math.log(2), abs=1e-15)

    def test_independence(self):
        assert mutual_info([0, 0, 1, 1], [0, 1, 0, 1]) == 0.0

    def test_two_by_two_table(self):
        table = [[3, 1], [1, 3]]
        x = [0] * 4 + [1] * 4
        y = [0, 0, 0, 1, 0, 1, 1, 1]
        assert mutual_info(x, y) == pytest.approx(mi_from_table(table), abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            mutual_info([0, 1], [0])

    def test_random_tables(self, rng):
        for _ in range(50):
            x = rng.integers(0, rng.integers(1, 6), size=rng.integers(2, 60))
            y = rng.integers(0, 4, size=x.size)
            assert mutual_info(x, y) == pytest.approx(mi_oracle(x.tolist(), y.tolist()), abs=1e-12)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(1, 60).flatmap(lambda n: st.tuples(
        st.lists(st.integers(0, 5), min_size=n, max_size=n),
        st.lists(st.integers(0, 5), min_size=n, max_size=n))))
    def test_symmetry_and_sign(self, xy):
        x, y = xy
        assert mutual_info(x, y) == mutual_info(y, x)
        assert mutual_info(x, y) >= 0.0
        assert mutual_info(x, x) == pytest.approx(entropy(x), abs=1e-12)


class TestRelevance:
    def test_label_defining_feature_wins(self, rng):
        X = rng.standard_normal((400, 6))
        y = (X[:, 3] > 0.2).astype(int)
        scores = mi_relevance(from_arrays(X, y), range(6))
        assert max(scores, key=scores.get) == 3
        assert all(scores[3] > scores[j] for j in range(6) if j != 3)

    def test_noise_feature_small(self):
        worst = 0.0
        for seed in range(20):
            r = np.random.default_rng(seed)
            d = from_arrays(r.standard_normal((1000, 2)), r.integers(0, 2, 1000))
            worst = max(worst, *mi_relevance(d, [0, 1]).values())
        assert 0.0 <= worst <= 0.05

    def test_duplicates_score_equal(self, rng):
        X = rng.standard_normal((100, 3))
        X[:, 2] = X[:, 0]
        s = mi_relevance(from_arrays(X, rng.integers(0, 2, 100)), range(3))
        assert s[0] == s[2]
