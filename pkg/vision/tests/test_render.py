import numpy as np
import pytest
from PIL import Image

from conftest import blob_images
from emvision import compose_grid, render_retrieved
from emvision.render import PAD, read_retrieval_csv


def write_retrieval_csv(path, coder, images, fills=(4, 100), tolerances=(0,)):
    """Tiny hand-built retrieval table: cue 1 rejected at the low fill."""
    n = 64
    feats = coder.encode(images)
    header = ("cue_id,true_label,fill_pct,tolerance,selected_label,accepted,"
              + ",".join(f"f{i}" for i in range(n)))
    lines = [header]
    for tol in tolerances:
        for cue_id in range(len(images)):
            for pct in fills:
                rejected = cue_id == 1 and pct == min(fills) and tol == 0
                if rejected:
                    lines.append(f"{cue_id},0,{pct},{tol},,0," + "," * (n - 1))
                else:
                    feat_text = ",".join(format(v, ".9g") for v in feats[cue_id])
                    lines.append(f"{cue_id},0,{pct},{tol},0,1,{feat_text}")
    path.write_text("\n".join(lines) + "\n")
    return path


def test_grid_layout_and_rejection_blanks(tmp_path, untrained_coder):
    images, _ = blob_images(3, seed=1)
    csv_path = write_retrieval_csv(tmp_path / "ret.csv", untrained_coder, images)
    written = render_retrieved(csv_path, untrained_coder, images, tmp_path / "out")
    assert sorted(written) == [0]

    grid = np.asarray(Image.open(written[0]))
    side, fills = 28, 2
    rows, cols = 2 + fills, 3
    assert grid.shape == (rows * (side + PAD) + PAD, cols * (side + PAD) + PAD)

    def tile(r, c):
        y = PAD + r * (side + PAD)
        x = PAD + c * (side + PAD)
        return grid[y:y + side, x:x + side]

    # top row: the cue images themselves, ink inverted onto white
    expected = np.round((1.0 - images[0]) * 255).astype(np.uint8)
    assert np.array_equal(tile(0, 0), expected)
    # cue 1 was rejected at the low fill: that tile is pure white
    assert (tile(2, 1) == 255).all()
    # same cue accepted at full fill: some ink present
    assert (tile(3, 1) < 255).any()
    # round-trip row present for every cue
    for c in range(3):
        assert (tile(1, c) < 255).any()


def test_render_per_tolerance_files(tmp_path, untrained_coder):
    images, _ = blob_images(2, seed=2)
    csv_path = write_retrieval_csv(tmp_path / "ret.csv", untrained_coder,
                                   images, tolerances=(0, 2))
    written = render_retrieved(csv_path, untrained_coder, images, tmp_path / "out")
    assert sorted(written) == [0, 2]
    for path in written.values():
        assert path.exists()


def test_render_is_deterministic(tmp_path, untrained_coder):
    images, _ = blob_images(2, seed=3)
    csv_path = write_retrieval_csv(tmp_path / "ret.csv", untrained_coder, images)
    first = render_retrieved(csv_path, untrained_coder, images, tmp_path / "a")
    second = render_retrieved(csv_path, untrained_coder, images, tmp_path / "b")
    assert first[0].read_bytes() == second[0].read_bytes()


def test_reader_rejects_non_retrieval_csv(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("fold,m,entropy\n0,1,0.5\n")
    with pytest.raises(ValueError):
        read_retrieval_csv(path)


def test_compose_grid_blank_handling():
    grid = compose_grid([[None, np.ones((4, 4))]], side=4)
    assert grid.shape == (4 + 2 * PAD, 2 * 4 + 3 * PAD)
    assert (grid[PAD:PAD + 4, PAD:PAD + 4] == 255).all()
    assert (grid[PAD:PAD + 4, 2 * PAD + 4:2 * PAD + 8] == 0).all()
