"""Inverse-dynamics domain adaptation: trajectory logs, a from-scratch MLP
trainer, a perturbed "pseudo-real" plant, and closed-loop evaluation."""

from .data import (
    LOG_HEADER,
    LogRow,
    TrajectorySample,
    dataset_arrays,
    make_identity_dataset,
    read_log,
    samples_from_log,
    write_log,
)
from .net import (
    MLPParams,
    ModelFormatError,
    TrainConfig,
    TrainResult,
    adapt,
    load_model,
    mlp_forward,
    mlp_gradients,
    mlp_init,
    mlp_train,
    save_model,
)
from .plant import PlantFilter, PseudoRealPlant, collect_trajectories, identity_plant
from .evaluate import EvalArm, EvalReport, eval_closed_loop, format_report, run_arm

__all__ = [
    "LOG_HEADER", "LogRow", "TrajectorySample", "dataset_arrays",
    "make_identity_dataset", "read_log", "samples_from_log", "write_log",
    "MLPParams", "ModelFormatError", "TrainConfig", "TrainResult", "adapt",
    "load_model", "mlp_forward", "mlp_gradients", "mlp_init", "mlp_train",
    "save_model", "PlantFilter", "PseudoRealPlant", "collect_trajectories",
    "identity_plant", "EvalArm", "EvalReport", "eval_closed_loop",
    "format_report", "run_arm",
]
