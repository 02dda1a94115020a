"""Gamma-stabilized greedy kernel interpolation."""

from ._stabgreedy import (
    ConditionDiagnostics,
    Error,
    GreedyConfig,
    GreedyModel,
    Kernel,
    KernelFamily,
    TargetFunction,
    blob_contains,
    fill_distance,
    fit_loglog,
    nine_window_rate,
    restricted_set,
    run,
    sample_blob,
    sample_cube,
    separation_distance,
    uniformity_constant,
)

__all__ = [
    "ConditionDiagnostics",
    "Error",
    "GreedyConfig",
    "GreedyModel",
    "Kernel",
    "KernelFamily",
    "TargetFunction",
    "blob_contains",
    "fill_distance",
    "fit_loglog",
    "nine_window_rate",
    "restricted_set",
    "run",
    "sample_blob",
    "sample_cube",
    "separation_distance",
    "uniformity_constant",
]
