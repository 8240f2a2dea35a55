"""Entropic associative memory: registers, quantization, evaluation."""

from .memory import UNDEFINED, ColumnRun, MemoryRegister, sample_triangular
from .quantize import Quantizer
from .system import MemorySystem, SystemDecision
from .dataset import (Dataset, DatasetFormatError, FILL_PERCENTS, Split,
                      read_dataset, split_for_fold, synth_generate,
                      take_fraction, write_dataset)
from .metrics import (RegisterMetrics, SystemMetrics, accept_matrix,
                      eval_register_metrics, eval_system_metrics)
from .experiments import (FillSweepConfig, OcclusionConfig, RetrievalConfig,
                          RowsSweepConfig, fill_sweep, occlusion_table,
                          retrieval_table, rows_sweep)

__version__ = "0.1.0"

__all__ = [
    "UNDEFINED", "ColumnRun", "MemoryRegister", "sample_triangular",
    "Quantizer", "MemorySystem", "SystemDecision",
    "Dataset", "DatasetFormatError", "FILL_PERCENTS", "Split",
    "read_dataset", "split_for_fold", "synth_generate", "take_fraction",
    "write_dataset",
    "RegisterMetrics", "SystemMetrics", "accept_matrix",
    "eval_register_metrics", "eval_system_metrics",
    "FillSweepConfig", "OcclusionConfig", "RetrievalConfig",
    "RowsSweepConfig", "fill_sweep", "occlusion_table", "retrieval_table",
    "rows_sweep",
    "__version__",
]
