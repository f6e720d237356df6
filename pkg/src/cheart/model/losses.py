"""Training objective: summed per-frame cross-entropy plus weighted KL."""
from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn.functional as F

from ..errors import ShapeError


@dataclass
class LossBreakdown:
    """Loss terms as 0-dim tensors; `total` carries the autograd graph."""

    total: torch.Tensor
    recon_per_frame: torch.Tensor  # shape (T,), batch-averaged
    recon_sum: torch.Tensor
    kl: torch.Tensor
    beta: float

    def as_floats(self) -> dict:
        return {
            "total": float(self.total),
            "recon_sum": float(self.recon_sum),
            "recon_per_frame": [float(v) for v in self.recon_per_frame],
            "kl": float(self.kl),
            "beta": self.beta,
        }


def kl_gaussian_standard(mu: torch.Tensor, log_var: torch.Tensor) -> torch.Tensor:
    """KL(N(mu, diag exp(log_var)) || N(0, I)), closed form, summed over dims.

    Batched inputs average over the batch axis.
    """
    if mu.shape != log_var.shape:
        raise ShapeError(f"mu/log_var shapes differ: {tuple(mu.shape)} vs {tuple(log_var.shape)}")
    per = 0.5 * (mu.pow(2) + log_var.exp() - 1.0 - log_var).sum(dim=-1)
    return per.mean() if per.dim() else per


def sequence_loss(
    logits: torch.Tensor,
    target: torch.Tensor,
    mu: torch.Tensor,
    log_var: torch.Tensor,
    beta: float,
) -> LossBreakdown:
    """Per-frame mean-voxel cross-entropy summed over frames, plus beta * KL.

    `logits` is (T, C, X, Y, Z) or (B, T, C, X, Y, Z); `target` holds class
    indices of shape (.., T, X, Y, Z) or one-hot probabilities shaped like
    `logits`. Batched inputs average both terms over the batch.
    """
    batched = logits.dim() == 6
    if not batched and logits.dim() != 5:
        raise ShapeError(f"logits must be 5-D or 6-D, got shape {tuple(logits.shape)}")
    if not batched:
        logits = logits.unsqueeze(0)
        target = target.unsqueeze(0)

    b, t = logits.shape[:2]
    spatial = logits.shape[3:]
    one_hot_target = target.dim() == logits.dim()
    if one_hot_target:
        if target.shape != logits.shape:
            raise ShapeError(f"one-hot target shape {tuple(target.shape)} != logits {tuple(logits.shape)}")
        flat_target = target.reshape(b * t, *logits.shape[2:])
    else:
        if target.shape != (b, t, *spatial):
            raise ShapeError(f"target shape {tuple(target.shape)} incompatible with logits {tuple(logits.shape)}")
        flat_target = target.reshape(b * t, *spatial).long()

    flat_logits = logits.reshape(b * t, *logits.shape[2:])
    per_frame = F.cross_entropy(flat_logits, flat_target, reduction="none")
    per_frame = per_frame.reshape(b, t, -1).mean(dim=2)  # voxel mean per frame

    recon_per_frame = per_frame.mean(dim=0)
    recon_sum = recon_per_frame.sum()
    kl = kl_gaussian_standard(mu, log_var)
    total = recon_sum + beta * kl
    if not torch.isfinite(total):
        raise ValueError("non-finite loss")
    return LossBreakdown(
        total=total, recon_per_frame=recon_per_frame, recon_sum=recon_sum, kl=kl, beta=float(beta)
    )
