import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entromem import (Dataset, DatasetFormatError, FILL_PERCENTS, Quantizer,
                      read_dataset, split_for_fold, synth_generate,
                      take_fraction, write_dataset)
from entromem.dataset import bucket_role


def tiny_dataset(quantizer=False, seed=None):
    # values chosen representable at the file's 9-significant-digit precision
    feats = np.array([[0.25, 1.5], [0.5, -3.0], [0.333333333, 2.71828183]])
    q = Quantizer(np.array([0.0, -3.0]), np.array([1.0, 3.0])) if quantizer else None
    return Dataset(feats, np.array([0, 1, 0]), np.array([5, 17, 99]),
                   alphabet="synthetic", class_names=["a", "b"],
                   quantizer=q, seed=seed)


class TestFileRoundTrip:
    def test_values_survive(self, tmp_path):
        ds = tiny_dataset(quantizer=True, seed=42)
        write_dataset(ds, tmp_path / "d.csv")
        back = read_dataset(tmp_path / "d.csv")
        assert np.array_equal(back.features, ds.features)
        assert np.array_equal(back.labels, ds.labels)
        assert np.array_equal(back.segments, ds.segments)
        assert back.alphabet == ds.alphabet
        assert back.class_names == ds.class_names
        assert back.seed == 42
        assert np.array_equal(back.quantizer.lo, ds.quantizer.lo)
        assert np.array_equal(back.quantizer.hi, ds.quantizer.hi)

    def test_rewrite_is_byte_identical(self, tmp_path):
        rng = np.random.default_rng(7)
        ds = Dataset(rng.normal(size=(500, 8)) * 1000,
                     rng.integers(0, 5, size=500),
                     rng.integers(0, 100, size=500))
        write_dataset(ds, tmp_path / "a.csv")
        write_dataset(read_dataset(tmp_path / "a.csv"), tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert (tmp_path / "a.meta").read_bytes() == (tmp_path / "b.meta").read_bytes()

    def test_large_file_rewrite_is_byte_identical(self, tmp_path):
        # golden-file comparison at the 10^5-instance scale
        rng = np.random.default_rng(17)
        ds = Dataset(rng.normal(scale=37.0, size=(100_000, 4)),
                     rng.integers(0, 7, size=100_000),
                     rng.integers(0, 100, size=100_000))
        write_dataset(ds, tmp_path / "big.csv")
        write_dataset(read_dataset(tmp_path / "big.csv"), tmp_path / "big2.csv")
        assert (tmp_path / "big.csv").read_bytes() \
            == (tmp_path / "big2.csv").read_bytes()

    def test_meta_sidecar_keys(self, tmp_path):
        write_dataset(tiny_dataset(quantizer=True, seed=3), tmp_path / "d.csv")
        meta = (tmp_path / "d.meta").read_text()
        for key in ('"n"', '"alphabet"', '"classes"', '"quantizer.lo"',
                    '"quantizer.hi"', '"seed"'):
            assert key in meta


class TestParseErrors:
    def write_files(self, tmp_path, csv_text, n=2, classes=("a", "b")):
        (tmp_path / "d.csv").write_text(csv_text)
        (tmp_path / "d.meta").write_text(json.dumps(
            {"n": n, "alphabet": "synthetic", "classes": list(classes)}))
        return tmp_path / "d.csv"

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetFormatError):
            read_dataset(tmp_path / "nope.csv")

    def test_missing_sidecar(self, tmp_path):
        (tmp_path / "d.csv").write_text("label,segment,f0,f1\n")
        with pytest.raises(DatasetFormatError, match="sidecar"):
            read_dataset(tmp_path / "d.csv")

    def test_malformed_header(self, tmp_path):
        path = self.write_files(tmp_path, "label,f0,f1\n0,1.0,2.0\n")
        with pytest.raises(DatasetFormatError, match=":1:"):
            read_dataset(path)

    def test_wrong_column_count_names_line(self, tmp_path):
        path = self.write_files(
            tmp_path, "label,segment,f0,f1\n0,3,1.0,2.0\n1,4,1.0\n")
        with pytest.raises(DatasetFormatError, match=":3:"):
            read_dataset(path)

    def test_label_out_of_range_names_line(self, tmp_path):
        path = self.write_files(
            tmp_path, "label,segment,f0,f1\n5,3,1.0,2.0\n")
        with pytest.raises(DatasetFormatError, match=":2:.*label"):
            read_dataset(path)

    def test_segment_out_of_range(self, tmp_path):
        path = self.write_files(
            tmp_path, "label,segment,f0,f1\n0,100,1.0,2.0\n")
        with pytest.raises(DatasetFormatError, match="segment"):
            read_dataset(path)

    def test_non_numeric_feature(self, tmp_path):
        path = self.write_files(
            tmp_path, "label,segment,f0,f1\n0,3,1.0,oops\n")
        with pytest.raises(DatasetFormatError, match=":2:"):
            read_dataset(path)


class TestSplits:
    def test_fold_zero_buckets(self):
        assert [bucket_role(b, 0) for b in (0, 9)] == ["test", "test"]
        assert [bucket_role(b, 0) for b in (10, 42)] == ["remember", "remember"]
        assert [bucket_role(b, 0) for b in (43, 99)] == ["train", "train"]

    def test_fold_nine_wraps(self):
        assert [bucket_role(b, 9) for b in (90, 99)] == ["test", "test"]
        assert [bucket_role(b, 9) for b in (0, 32)] == ["remember", "remember"]
        assert [bucket_role(b, 9) for b in (33, 89)] == ["train", "train"]

    def test_roles_partition_every_fold(self):
        ds = synth_generate(3, 40, 4, rows_hint=8, separation=0.1, seed=0)
        everything = set(range(len(ds)))
        for fold in range(10):
            split = split_for_fold(ds, fold)
            chunks = [set(split.train.tolist()), set(split.remember.tolist()),
                      set(split.test.tolist())]
            assert chunks[0] | chunks[1] | chunks[2] == everything
            assert not (chunks[0] & chunks[1] or chunks[0] & chunks[2]
                        or chunks[1] & chunks[2])

    def test_role_proportions_exact_on_full_buckets(self):
        # 100 instances, one per bucket
        ds = Dataset(np.zeros((100, 2)), np.zeros(100, dtype=int),
                     np.arange(100), class_names=["only"])
        for fold in range(10):
            split = split_for_fold(ds, fold)
            assert (split.test.size, split.remember.size, split.train.size) \
                == (10, 33, 57)

    def test_fold_out_of_range(self):
        ds = tiny_dataset()
        with pytest.raises(ValueError):
            split_for_fold(ds, 10)


class TestTakeFraction:
    def test_hundred_percent_keeps_everything(self):
        labels = np.array([0, 1, 0, 1, 1])
        assert take_fraction(labels, 100).tolist() == [0, 1, 2, 3, 4]

    def test_one_percent_of_2800_is_28(self):
        labels = np.zeros(2800, dtype=int)
        assert take_fraction(labels, 1).size == 28

    def test_prefixes_are_nested_and_per_class(self):
        rng = np.random.default_rng(5)
        labels = rng.integers(0, 4, size=400)
        previous = set()
        for pct in FILL_PERCENTS:
            chosen = set(take_fraction(labels, pct).tolist())
            assert previous <= chosen
            previous = chosen
        assert previous == set(range(400))

    def test_ceil_rounds_up(self):
        labels = np.array([0, 0, 0, 1])  # 1% of 3 -> 1; 1% of 1 -> 1
        assert take_fraction(labels, 1).tolist() == [0, 3]

    def test_unsupported_percent_rejected(self):
        with pytest.raises(ValueError):
            take_fraction(np.array([0, 1]), 50)


class TestSynthGenerator:
    def test_same_seed_byte_identical(self, tmp_path):
        for name in ("x", "y"):
            ds = synth_generate(4, 25, 6, rows_hint=16, separation=0.03, seed=9)
            write_dataset(ds, tmp_path / f"{name}.csv")
        assert (tmp_path / "x.csv").read_bytes() == (tmp_path / "y.csv").read_bytes()
        assert (tmp_path / "x.meta").read_bytes() == (tmp_path / "y.meta").read_bytes()

    def test_generated_values_reload_identically(self, tmp_path):
        ds = synth_generate(3, 20, 5, 8, 0.05, seed=4)
        write_dataset(ds, tmp_path / "d.csv")
        assert np.array_equal(read_dataset(tmp_path / "d.csv").features, ds.features)

    def test_different_seeds_differ(self):
        a = synth_generate(3, 20, 5, 8, 0.05, seed=1)
        b = synth_generate(3, 20, 5, 8, 0.05, seed=2)
        assert not np.array_equal(a.features, b.features)

    def test_segments_cover_all_buckets(self):
        ds = synth_generate(2, 200, 3, 8, 0.05, seed=0)
        assert set(ds.segments.tolist()) == set(range(100))

    def test_labels_blocked_per_class(self):
        ds = synth_generate(3, 15, 4, 8, 0.05, seed=0)
        assert ds.labels.tolist() == [0] * 15 + [1] * 15 + [2] * 15

    def test_tight_classes_have_distant_centroids(self):
        ds = synth_generate(6, 10, 16, 8, separation=0.001, seed=3)
        means = [ds.features[ds.labels == c].mean(axis=0) for c in range(6)]
        for i in range(6):
            for j in range(i + 1, 6):
                assert np.linalg.norm(means[i] - means[j]) > 0.25 * np.sqrt(16)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            synth_generate(1, 20, 4, 8, 0.1, 0)
        with pytest.raises(ValueError):
            synth_generate(3, 5, 4, 8, 0.1, 0)


@given(st.integers(0, 9), st.integers(0, 99))
@settings(max_examples=200, deadline=None)
def test_bucket_roles_rotate_consistently(fold, segment):
    # the role of a bucket under fold k equals the role of bucket+10 under k+1
    role = bucket_role(segment, fold)
    rotated = bucket_role((segment + 10) % 100, (fold + 1) % 10)
    assert role == rotated
