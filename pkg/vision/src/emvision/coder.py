"""Analysis/synthesis autoencoder with a training-time classifier head.

The encoder (a small VGG-flavored stack, ten convolutional layers) maps a
28x28 glyph to 64 real features; the decoder (four transposed convolutions)
maps 64 features back to an image. A two-layer classifier head joins them
during training so the bottleneck stays discriminative as well as
decodable; it is dropped from the saved artifact once training ends. The
three parts train jointly with equally weighted reconstruction and
classification losses.

Encoder and decoder remain independently callable: features produced by
`encode` are exactly what downstream memories store, and `decode` accepts
any 64-vector, including retrieved ones.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
import torch
from torch import nn

IMAGE_SIDE = 28
FEATURES = 64


@dataclass(frozen=True)
class CoderConfig:
    classes: int
    features: int = FEATURES
    epochs: int = 5
    batch_size: int = 128
    learning_rate: float = 1e-3
    seed: int = 0


def _conv(cin, cout):
    return [nn.Conv2d(cin, cout, 3, padding=1), nn.BatchNorm2d(cout), nn.ReLU()]


class Encoder(nn.Module):
    def __init__(self, features: int = FEATURES):
        super().__init__()
        layers = []
        layers += _conv(1, 32) + _conv(32, 32) + [nn.MaxPool2d(2)]      # 14x14
        layers += _conv(32, 64) + _conv(64, 64) + [nn.MaxPool2d(2)]     # 7x7
        layers += _conv(64, 96) + _conv(96, 96) + [nn.MaxPool2d(2)]     # 3x3
        layers += _conv(96, 128) + _conv(128, 128)
        layers += _conv(128, 128) + _conv(128, 128)                     # 10 convs
        self.stack = nn.Sequential(*layers)
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.project = nn.Linear(128, features)

    def forward(self, x):
        z = self.pool(self.stack(x)).flatten(1)
        return self.project(z)


class Decoder(nn.Module):
    def __init__(self, features: int = FEATURES):
        super().__init__()
        self.expand = nn.Linear(features, 96 * 7 * 7)
        self.stack = nn.Sequential(
            nn.ConvTranspose2d(96, 64, 4, stride=2, padding=1), nn.ReLU(),   # 14
            nn.ConvTranspose2d(64, 32, 4, stride=2, padding=1), nn.ReLU(),   # 28
            nn.ConvTranspose2d(32, 16, 3, padding=1), nn.ReLU(),
            nn.ConvTranspose2d(16, 1, 3, padding=1),
        )

    def forward(self, z):
        x = self.expand(z).reshape(-1, 96, 7, 7)
        return torch.sigmoid(self.stack(x))


class ClassifierHead(nn.Module):
    def __init__(self, classes: int, features: int = FEATURES):
        super().__init__()
        self.net = nn.Sequential(nn.Linear(features, 128), nn.ReLU(),
                                 nn.Linear(128, classes))

    def forward(self, z):
        return self.net(z)


def _to_image_tensor(images: np.ndarray) -> torch.Tensor:
    images = np.asarray(images)
    if images.dtype == np.uint8:
        images = images.astype(np.float32) / 255.0
    x = torch.as_tensor(images, dtype=torch.float32)
    return x.unsqueeze(1)  # (k, 1, h, w)


class TrainedCoder:
    """Encoder/decoder pair kept after the classifier head is discarded."""

    def __init__(self, encoder: Encoder, decoder: Decoder, config: CoderConfig,
                 report: dict | None = None):
        self.encoder = encoder.eval()
        self.decoder = decoder.eval()
        self.config = config
        self.report = report or {}

    @torch.no_grad()
    def encode(self, images: np.ndarray, batch: int = 512) -> np.ndarray:
        x = _to_image_tensor(images)
        chunks = [self.encoder(x[i:i + batch]).numpy()
                  for i in range(0, len(x), batch)]
        return np.concatenate(chunks).astype(np.float64)

    @torch.no_grad()
    def decode(self, features: np.ndarray, batch: int = 512) -> np.ndarray:
        z = torch.as_tensor(np.asarray(features), dtype=torch.float32)
        chunks = [self.decoder(z[i:i + batch]).squeeze(1).numpy()
                  for i in range(0, len(z), batch)]
        return np.concatenate(chunks)

    def save(self, path) -> None:
        torch.save({
            "config": asdict(self.config),
            "architecture": {
                "encoder": "vgg-flavored, 10 conv layers, GAP, linear bottleneck",
                "decoder": "linear expand, 4 transposed conv layers, sigmoid",
                "classifier_head": "2-layer FCNN, discarded after training",
                "loss": "BCE reconstruction + CE classification, equal weights",
                "normalization": "pixels scaled to [0,1], nothing else",
            },
            "report": self.report,
            "encoder_state": self.encoder.state_dict(),
            "decoder_state": self.decoder.state_dict(),
        }, path)

    @classmethod
    def load(cls, path) -> "TrainedCoder":
        payload = torch.load(path, map_location="cpu", weights_only=False)
        config = CoderConfig(**payload["config"])
        encoder = Encoder(config.features)
        decoder = Decoder(config.features)
        encoder.load_state_dict(payload["encoder_state"])
        decoder.load_state_dict(payload["decoder_state"])
        return cls(encoder, decoder, config, payload.get("report"))


def train_coder(images: np.ndarray, labels: np.ndarray, config: CoderConfig,
                val_images: np.ndarray | None = None,
                val_labels: np.ndarray | None = None,
                verbose: bool = False) -> TrainedCoder:
    """Joint supervised training; returns the coder without the classifier.

    The report records per-epoch losses and, when a validation set is given,
    the classifier head's accuracy on it (measured before the head is
    dropped).
    """
    torch.manual_seed(config.seed)
    encoder = Encoder(config.features)
    decoder = Decoder(config.features)
    head = ClassifierHead(config.classes, config.features)

    x = _to_image_tensor(images)
    y = torch.as_tensor(np.asarray(labels), dtype=torch.long)
    optimizer = torch.optim.Adam(
        [*encoder.parameters(), *decoder.parameters(), *head.parameters()],
        lr=config.learning_rate)
    recon_loss = nn.BCELoss()
    class_loss = nn.CrossEntropyLoss()

    generator = torch.Generator().manual_seed(config.seed)
    history = []
    for epoch in range(config.epochs):
        encoder.train(), decoder.train(), head.train()
        order = torch.randperm(len(x), generator=generator)
        total = 0.0
        for start in range(0, len(x), config.batch_size):
            batch = order[start:start + config.batch_size]
            optimizer.zero_grad()
            z = encoder(x[batch])
            loss = recon_loss(decoder(z), x[batch]) + class_loss(head(z), y[batch])
            loss.backward()
            optimizer.step()
            total += loss.item() * len(batch)
        history.append(total / len(x))
        if verbose:
            print(f"epoch {epoch + 1}/{config.epochs}: loss {history[-1]:.4f}")

    report = {"train_loss": history}
    if val_images is not None:
        report["classifier_accuracy"] = classifier_accuracy(
            encoder, head, val_images, val_labels)
        if verbose:
            print(f"classifier accuracy: {report['classifier_accuracy']:.4f}")
    return TrainedCoder(encoder, decoder, config, report)


@torch.no_grad()
def classifier_accuracy(encoder: Encoder, head: ClassifierHead,
                        images: np.ndarray, labels: np.ndarray,
                        batch: int = 512) -> float:
    encoder.eval(), head.eval()
    x = _to_image_tensor(images)
    y = torch.as_tensor(np.asarray(labels), dtype=torch.long)
    hits = 0
    for i in range(0, len(x), batch):
        hits += int((head(encoder(x[i:i + batch])).argmax(1) == y[i:i + batch]).sum())
    return hits / len(x)
