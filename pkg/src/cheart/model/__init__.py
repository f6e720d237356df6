"""Conditional VAE with a recurrent latent rollout over the cardiac cycle."""
from .checkpoint import CHECKPOINT_FORMAT_VERSION, load_checkpoint, save_checkpoint
from .losses import LossBreakdown, kl_gaussian_standard, sequence_loss
from .networks import (
    CardiacVAE,
    ModelConfig,
    conv_stage_plan,
    init_parameters,
)

__all__ = [
    "CHECKPOINT_FORMAT_VERSION",
    "CardiacVAE",
    "LossBreakdown",
    "ModelConfig",
    "conv_stage_plan",
    "init_parameters",
    "kl_gaussian_standard",
    "load_checkpoint",
    "save_checkpoint",
    "sequence_loss",
]
