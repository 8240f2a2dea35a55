"""Image pipeline: EMNIST ingestion, coding, occlusion, rendering, plots."""

from .alphabet import AlphabetMap, build_alphabet
from .coder import CoderConfig, TrainedCoder, train_coder
from .emnist import assign_segments, available, load_balanced, load_split, read_idx
from .export import export_features, write_feature_dataset
from .occlude import masked_fraction, occlude
from .plots import plot_metrics, plot_sweep
from .render import compose_grid, read_retrieval_csv, render_retrieved

__version__ = "0.1.0"

__all__ = [
    "AlphabetMap", "build_alphabet",
    "CoderConfig", "TrainedCoder", "train_coder",
    "assign_segments", "available", "load_balanced", "load_split", "read_idx",
    "export_features", "write_feature_dataset",
    "masked_fraction", "occlude",
    "plot_metrics", "plot_sweep",
    "compose_grid", "read_retrieval_csv", "render_retrieved",
    "__version__",
]
