"""Core package initialization"""

from odelip.core.dynamics import RhsSystem, Trajectory
from odelip.core.dataset import NoiseSpec, SamplePair, SampleSet, Provenance, Dataset
from odelip.core.network import MlpParams, Gradients, ForwardTape
from odelip.core.training import TrainConfig, StopRule, EpochStats, TrainRecord, SweepResult
from odelip.core.report import ReportRow, ExperimentReport
from odelip.core.errors import (
    OdelipError,
    InputError,
    DomainError,
    IntegrationError,
    DivergenceError,
    NormalizationError,
    ConfigError,
    CheckpointError,
)

__all__ = [
    "RhsSystem",
    "Trajectory",
    "NoiseSpec",
    "SamplePair",
    "SampleSet",
    "Provenance",
    "Dataset",
    "MlpParams",
    "Gradients",
    "ForwardTape",
    "TrainConfig",
    "StopRule",
    "EpochStats",
    "TrainRecord",
    "SweepResult",
    "ReportRow",
    "ExperimentReport",
    "OdelipError",
    "InputError",
    "DomainError",
    "IntegrationError",
    "DivergenceError",
    "NormalizationError",
    "ConfigError",
    "CheckpointError",
]
