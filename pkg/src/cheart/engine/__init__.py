"""Training and inference procedures over the conditional sequence model."""
from .infer import (
    SweepResult,
    complete_sequence,
    condition_sweep,
    export_latent_trajectories,
    generate_sequences,
    make_completer,
    make_generator,
    project_pca2d,
)
from .train import EpochRecord, TrainConfig, TrainHistory, train

__all__ = [
    "EpochRecord",
    "SweepResult",
    "TrainConfig",
    "TrainHistory",
    "complete_sequence",
    "condition_sweep",
    "export_latent_trajectories",
    "generate_sequences",
    "make_completer",
    "make_generator",
    "project_pca2d",
    "train",
]
