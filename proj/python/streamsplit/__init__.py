"""Python bindings for the streamsplit C++ library."""

from ._core import (
    ConfigError,
    DerivedParams,
    DyadicCmSketch,
    EmptyStreamError,
    Error,
    FormatError,
    HardInstance,
    InstanceKind,
    IoError,
    LossKind,
    SketchLayout,
    SplitResult,
    ValidationError,
    derive_params,
    exact_loss,
    exact_loss_curve,
    exact_opt,
    gen_instance,
    run_gini,
    run_regression,
    verify_instance,
)

__all__ = [
    "ConfigError",
    "DerivedParams",
    "DyadicCmSketch",
    "EmptyStreamError",
    "Error",
    "FormatError",
    "HardInstance",
    "InstanceKind",
    "IoError",
    "LossKind",
    "SketchLayout",
    "SplitResult",
    "ValidationError",
    "derive_params",
    "exact_loss",
    "exact_loss_curve",
    "exact_opt",
    "gen_instance",
    "run_gini",
    "run_regression",
    "verify_instance",
]
