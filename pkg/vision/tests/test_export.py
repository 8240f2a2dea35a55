import json
import shutil
import subprocess

import numpy as np
import pytest

from conftest import blob_images
from emvision import build_alphabet, export_features, write_feature_dataset


def test_writer_emits_the_interface_format(tmp_path):
    path = tmp_path / "f.csv"
    write_feature_dataset(path, np.array([[0.5, 0.25], [1.0, 2.0]]),
                          np.array([0, 1]), np.array([3, 40]),
                          alphabet="emnist-36", class_names=["A", "B"], seed=9)
    lines = path.read_text().splitlines()
    assert lines[0] == "label,segment,f0,f1"
    assert lines[1] == "0,3,0.5,0.25"
    assert lines[2] == "1,40,1,2"
    meta = json.loads((tmp_path / "f.meta").read_text())
    assert meta == {"n": 2, "alphabet": "emnist-36", "classes": ["A", "B"],
                    "seed": 9}


def test_writer_uses_nine_significant_digits(tmp_path):
    path = tmp_path / "f.csv"
    write_feature_dataset(path, np.array([[1 / 3]]), np.array([0]),
                          np.array([0]), "synthetic", ["a"])
    assert path.read_text().splitlines()[1] == "0,0,0.333333333"


def test_writer_rejects_mismatched_lengths(tmp_path):
    with pytest.raises(ValueError):
        write_feature_dataset(tmp_path / "f.csv", np.zeros((2, 3)),
                              np.array([0]), np.array([0, 1]), "synthetic", ["a"])


def test_export_row_order_matches_image_order(tmp_path, untrained_coder):
    images, _ = blob_images(8, seed=1)
    raw = np.array([0, 7, 36, 45, 9, 10, 35, 46])  # digits, caps, lowers
    segments = np.arange(8)
    amap = build_alphabet(36)
    out = tmp_path / "features.csv"
    labels = export_features(untrained_coder, images, raw, segments, amap, out,
                             save_images=True)
    assert labels.tolist() == amap.apply(raw).tolist()

    lines = out.read_text().splitlines()
    assert len(lines) == 9
    assert [int(line.split(",")[0]) for line in lines[1:]] == labels.tolist()
    # row i encodes image i
    feats = untrained_coder.encode(images)
    first = [float(v) for v in lines[1].split(",")[2:]]
    assert np.allclose(first, feats[0], atol=1e-6)

    payload = np.load(tmp_path / "features.images.npz")
    assert np.array_equal(payload["images"], images)


@pytest.mark.skipif(shutil.which("entromem") is None,
                    reason="memory harness CLI not on PATH")
def test_exported_file_passes_harness_validation(tmp_path, untrained_coder):
    images, _ = blob_images(10, seed=2)
    raw = np.arange(10) % 47
    amap = build_alphabet(47)
    out = tmp_path / "features.csv"
    export_features(untrained_coder, images, raw, np.arange(10) % 100, amap, out)
    proc = subprocess.run(["entromem", "validate", "--data", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "OK" in proc.stdout
