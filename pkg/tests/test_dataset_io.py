import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irfs.dataset_io import (
    Dataset,
    SplitSpec,
    from_arrays,
    load_csv,
    split,
    split_indices,
    write_csv,
)
from irfs.errors import LabelError, ParseError, SchemaError, SplitError


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadCsv:
    def test_three_row_readback(self, tmp_path):
        p = write(tmp_path, "a,b,y\n1,2,0\n3,4,1\n5,6,0")
        d = load_csv(p, "y", min_samples=3)
        assert d.N == 2 and d.num_samples == 3
        assert d.labels.tolist() == [0, 1, 0]
        assert d.feature_names == ("a", "b")
        np.testing.assert_array_equal(d.features, [[1, 2], [3, 4], [5, 6]])

    def test_default_minimum_rows_enforced(self, tmp_path):
        p = write(tmp_path, "a,b,y\n1,2,0\n3,4,1\n5,6,0")
        with pytest.raises(SchemaError):
            load_csv(p, "y")

    def test_nan_cell_rejected(self, tmp_path):
        rows = "\n".join(f"{i},{i * 2},{i % 2}" for i in range(12))
        p = write(tmp_path, "a,b,y\n" + rows + "\n1,NaN,0\n")
        with pytest.raises(ParseError) as exc:
            load_csv(p, "y")
        assert exc.value.row == 14 and exc.value.col == 1

    def test_garbage_cell_rejected(self, tmp_path):
        rows = "\n".join(f"{i},{i * 2},{i % 2}" for i in range(12))
        p = write(tmp_path, rows + "\n1,x2,0\n")
        with pytest.raises(ParseError):
            load_csv(p, -1, has_header=False)

    def test_single_feature_column_rejected(self, tmp_path):
        p = write(tmp_path, "\n".join(f"{i},{i % 2}" for i in range(12)))
        with pytest.raises(SchemaError):
            load_csv(p)

    def test_single_class_rejected(self, tmp_path):
        p = write(tmp_path, "\n".join(f"{i},{i},spam" for i in range(12)))
        with pytest.raises(LabelError):
            load_csv(p)

    def test_headerless_with_text_labels(self, tmp_path):
        body = "\n".join(f"{i},{-i},{'spam' if i % 3 else 'ham'}" for i in range(12))
        d = load_csv(write(tmp_path, body))
        assert d.num_samples == 12
        assert d.feature_names == ("f0", "f1")
        # first appearance order: row 0 is 'ham'
        assert d.labels[0] == 0 and d.labels[1] == 1
        assert d.num_classes == 2

    def test_numeric_header_needs_override(self, tmp_path):
        body = "1,2,3\n" + "\n".join(f"{i},{i + 1},{i % 2}" for i in range(12))
        p = write(tmp_path, body)
        assert load_csv(p).num_samples == 13
        d = load_csv(p, has_header=True)
        assert d.num_samples == 12
        assert d.feature_names == ("1", "2")

    def test_label_column_by_index(self, tmp_path):
        body = "\n".join(f"{i % 2},{i},{i * i}" for i in range(12))
        d = load_csv(write(tmp_path, body), 0)
        np.testing.assert_array_equal(d.features[:, 0], np.arange(12))
        assert d.labels.tolist() == [0, 1] * 6

    def test_unknown_label_name(self, tmp_path):
        p = write(tmp_path, "a,b,y\n" + "\n".join(f"{i},{i},{i % 2}" for i in range(12)))
        with pytest.raises(SchemaError):
            load_csv(p, "label")

    def test_spambase_shape(self, tmp_path, rng):
        # same layout as the UCI file: 57 numeric columns then a 0/1 class, no header
        X = rng.random((4601, 57)).round(3)
        y = rng.integers(0, 2, 4601)
        lines = [",".join(f"{v:g}" for v in row) + f",{c}" for row, c in zip(X, y)]
        d = load_csv(write(tmp_path, "\n".join(lines) + "\n", "spambase.data"))
        assert d.N == 57 and d.num_samples == 4601


class TestDatasetInvariants:
    def test_features_are_read_only(self, separable_data):
        with pytest.raises(ValueError):
            separable_data.features[0, 0] = 1.0

    def test_inf_rejected(self):
        with pytest.raises(SchemaError):
            Dataset("x", [[1.0, np.inf]] * 3, [0, 1, 0], ("a", "b"))

    def test_label_out_of_range(self):
        with pytest.raises(LabelError):
            Dataset("x", [[1.0, 2.0]] * 3, [0, 1, 2], ("a", "b"), num_classes=2)

    def test_from_arrays_keeps_dense_labels(self):
        d = from_arrays(np.zeros((4, 2)), [1, 0, 1, 0])
        assert d.labels.tolist() == [1, 0, 1, 0]


class TestRoundTrip:
    def test_bitwise_equal_after_reload(self, tmp_path, rng):
        X = rng.standard_normal((25, 4)) * 10.0 ** rng.integers(-8, 8, (25, 4))
        d = from_arrays(X, rng.integers(0, 3, 25))
        write_csv(d, tmp_path / "rt.csv")
        back = load_csv(tmp_path / "rt.csv", "label")
        assert back.features.tobytes() == d.features.tobytes()
        assert back.feature_names == d.feature_names


class TestSplit:
    def test_ninety_ten(self):
        d = from_arrays(np.arange(200.0).reshape(100, 2), np.arange(100) % 2)
        tr, te = split(d, SplitSpec(0.9, 7))
        assert (tr.num_samples, te.num_samples) == (90, 10)
        tr2, _ = split(d, SplitSpec(0.9, 7))
        assert tr.features.tobytes() == tr2.features.tobytes()

    def test_half(self):
        d = from_arrays(np.arange(20.0).reshape(10, 2), [0, 1] * 5)
        tr, te = split(d, SplitSpec(0.5, 0))
        assert (tr.num_samples, te.num_samples) == (5, 5)

    def test_different_seeds_differ(self):
        a, _ = split_indices(100, SplitSpec(0.9, 1))
        b, _ = split_indices(100, SplitSpec(0.9, 2))
        assert a.tolist() != b.tolist()

    def test_empty_half_rejected(self):
        with pytest.raises(SplitError):
            split_indices(10, SplitSpec(0.99, 0))

    def test_single_class_train_rejected(self):
        d = from_arrays(np.arange(22.0).reshape(11, 2), [0] * 10 + [1])
        with pytest.raises(SplitError):
            split(d, SplitSpec(0.1, 0))

    @pytest.mark.parametrize("fraction", [0.0, 1.0, -0.5])
    def test_bad_fraction(self, fraction):
        with pytest.raises(SplitError):
            SplitSpec(fraction)

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(2, 400), frac=st.floats(0.05, 0.95), seed=st.integers(0, 2**32 - 1))
    def test_partition_property(self, n, frac, seed):
        spec = SplitSpec(frac, seed)
        try:
            tr, te = split_indices(n, spec)
        except SplitError:
            return
        both = np.concatenate([tr, te])
        assert sorted(both.tolist()) == list(range(n))
        assert tr.size == int(np.floor(frac * n + 0.5))
        tr2, te2 = split_indices(n, spec)
        assert tr.tolist() == tr2.tolist() and te.tolist() == te2.tolist()
