import numpy as np
import pytest

from emvision.coder import CoderConfig, Decoder, Encoder, TrainedCoder

BLOB_CENTERS = [(6, 6), (6, 20), (20, 13)]


def blob_images(count, classes=3, seed=0, side=28):
    """Class-distinct square blobs; quick stand-in for glyph data."""
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, classes, size=count)
    images = np.zeros((count, side, side), dtype=np.float32)
    for i, cls in enumerate(labels):
        y, x = BLOB_CENTERS[cls % len(BLOB_CENTERS)]
        images[i, y - 4:y + 4, x - 4:x + 4] = rng.uniform(0.6, 1.0, (8, 8))
    return images, labels


@pytest.fixture(scope="session")
def untrained_coder():
    """Wiring-test coder: real architecture, no training."""
    import torch
    torch.manual_seed(0)
    return TrainedCoder(Encoder(), Decoder(), CoderConfig(classes=3, epochs=0))
