from .batching import Batch, make_batch
from .benchmark import emit_plots, load_records, plan_matrix, run_benchmark, write_reports
from .config import PROTOCOLS, ConfigError, ExperimentConfig
from .training import (
    RunRecord,
    Trainer,
    TrainingDiverged,
    evaluate,
    execute_run,
    fine_tune_protocol,
    train,
    write_gate_trace,
)

__all__ = [
    "Batch", "make_batch", "emit_plots", "load_records", "plan_matrix",
    "run_benchmark", "write_reports", "PROTOCOLS", "ConfigError",
    "ExperimentConfig", "RunRecord", "Trainer", "TrainingDiverged",
    "evaluate", "execute_run", "fine_tune_protocol", "train", "write_gate_trace",
]
