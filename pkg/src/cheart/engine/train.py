"""End-to-end training of the conditional sequence model.

Encoder, condition embedder, temporal module and decoder are optimized
jointly on the summed-frame loss. Everything random draws from explicit
generators derived from the config seed, so a (dataset, config) pair maps
to exactly one final checkpoint.
"""
from __future__ import annotations

import copy
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from ..datakit.conditions import encode_conditions
from ..datakit.types import Dataset
from ..errors import RolloutError, TrainingError
from ..model.losses import sequence_loss
from ..model.networks import CardiacVAE, ModelConfig, init_parameters

DEFAULT_FRAME_PERIOD_S = 0.045


LR_SCHEDULES = ("constant", "cosine")


@dataclass
class TrainConfig:
    epochs: int = 500
    patience: int = 25
    lr: float = 5e-4
    batch_size: int = 8
    beta: float = 0.001
    beta_warmup_epochs: int = 0  # ramp the KL weight linearly from beta/N to beta over the first N epochs
    seed: int = 0
    lr_schedule: str = "constant"  # "cosine" decays to 5% of lr by the last epoch
    history_path: str | None = None  # JSONL, one epoch per line

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")
        if self.lr <= 0 or self.beta < 0:
            raise ValueError("lr must be positive and beta non-negative")
        if self.patience < 0:
            raise ValueError("patience must be >= 0")
        if self.beta_warmup_epochs < 0:
            raise ValueError("beta_warmup_epochs must be >= 0")
        if self.lr_schedule not in LR_SCHEDULES:
            raise ValueError(f"lr_schedule must be one of {LR_SCHEDULES}, got {self.lr_schedule!r}")


def _lr_factor(schedule: str, epoch: int, total_epochs: int) -> float:
    """Multiplier on the base lr for a 1-based epoch index."""
    if schedule == "constant":
        return 1.0
    span = max(total_epochs - 1, 1)
    return 0.05 + 0.95 * 0.5 * (1.0 + math.cos(math.pi * (epoch - 1) / span))


def _beta_factor(epoch: int, warmup_epochs: int) -> float:
    """KL-weight multiplier for a 1-based epoch index: linear ramp up to 1."""
    if warmup_epochs <= 0:
        return 1.0
    return min(1.0, epoch / warmup_epochs)


@dataclass
class EpochRecord:
    epoch: int
    train: dict
    val: dict
    wall_time_s: float

    def as_dict(self) -> dict:
        return {
            "epoch": self.epoch,
            "train": self.train,
            "val": self.val,
            "wall_time_s": self.wall_time_s,
        }


@dataclass
class TrainHistory:
    records: list[EpochRecord] = field(default_factory=list)
    best_epoch: int = -1
    best_val_total: float = float("inf")

    def append(self, record: EpochRecord, path: str | None = None):
        self.records.append(record)
        if path:
            with open(path, "a") as fh:
                fh.write(json.dumps(record.as_dict(), sort_keys=True) + "\n")

    def __len__(self) -> int:
        return len(self.records)


class _SplitTensors:
    """One split as dense tensors: labels (N, T, X, Y, Z) and conditions (N, 11)."""

    def __init__(self, records, config: ModelConfig):
        if not records:
            raise TrainingError("empty split")
        labels, cvecs = [], []
        for rec in records:
            seq = rec.sequence
            if seq.dims != config.grid_dims:
                raise TrainingError(
                    f"subject {rec.subject_id} grid {seq.dims} != model grid {config.grid_dims}"
                )
            if seq.t_frames != config.t_frames:
                raise TrainingError(
                    f"subject {rec.subject_id} has {seq.t_frames} frames, model expects {config.t_frames}"
                )
            labels.append(torch.from_numpy(seq.label_stack().astype(np.int64)))
            cvecs.append(torch.from_numpy(encode_conditions(rec.profile, config.bounds).values.astype(np.float32)))
        self.labels = torch.stack(labels)
        self.cvecs = torch.stack(cvecs)
        self.n = len(records)

    def batch(self, idx: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        target = self.labels[idx]
        x0 = torch.nn.functional.one_hot(target[:, 0], 4).permute(0, 4, 1, 2, 3).float()
        return x0, self.cvecs[idx], target


def _epoch_pass(model, split: _SplitTensors, config, optimizer=None, eps_gen=None, order=None, beta=None):
    """One pass over a split. With an optimizer this trains; otherwise it
    evaluates at the posterior mean (eps = 0), keeping validation deterministic.
    `beta` overrides the configured KL weight for this pass only."""
    if beta is None:
        beta = config.beta
    totals = {"total": 0.0, "recon_sum": 0.0, "kl": 0.0}
    idx_all = order if order is not None else torch.arange(split.n)
    n_batches = 0
    for start in range(0, split.n, config.batch_size):
        idx = idx_all[start : start + config.batch_size]
        x0, cvec, target = split.batch(idx)
        if optimizer is not None:
            eps = torch.randn(len(idx), model.config.z0_dim, generator=eps_gen)
        else:
            eps = torch.zeros(len(idx), model.config.z0_dim)
        logits, mu, log_var, _ = model(x0, cvec, eps)
        loss = sequence_loss(logits, target, mu, log_var, beta)
        if optimizer is not None:
            optimizer.zero_grad()
            loss.total.backward()
            optimizer.step()
        totals["total"] += loss.total.item() * len(idx)
        totals["recon_sum"] += loss.recon_sum.item() * len(idx)
        totals["kl"] += loss.kl.item() * len(idx)
        n_batches += 1
    return {k: v / split.n for k, v in totals.items()}


def calibrate_latent_prior(model: CardiacVAE, records) -> None:
    """Fit the model's conditional latent law to its posteriors over `records`.

    Least squares from condition vectors (plus intercept) to posterior means
    gives the condition-driven latent location; the residual spread plus the
    mean posterior variance gives the per-dimension scale. Sampling through
    the fitted law then reproduces the conditional latent spread the decoder
    was trained with, instead of the wider unconditional one. The SVD solver
    keeps the fit deterministic and tolerant of unused condition entries
    (e.g. an age group absent from the cohort).
    """
    split = _SplitTensors(records, model.config)
    mus, vars_ = [], []
    model.eval()
    with torch.no_grad():
        for start in range(0, split.n, 32):
            x0, cvec, _ = split.batch(torch.arange(start, min(start + 32, split.n)))
            mu, log_var = model.encode(x0, model.embed(cvec))
            mus.append(mu)
            vars_.append(log_var.exp())
    mu = torch.cat(mus)
    var = torch.cat(vars_)
    design = torch.cat([split.cvecs, torch.ones(split.n, 1)], dim=1)
    weight = torch.linalg.lstsq(design, mu, driver="gelsd").solution
    resid = mu - design @ weight
    scale = (resid.var(dim=0, unbiased=False) + var.mean(dim=0)).sqrt()
    with torch.no_grad():
        model.z0_cond_weight.copy_(weight)
        model.z0_resid_scale.copy_(scale)


def train(
    dataset: Dataset, model_config: ModelConfig, config: TrainConfig
) -> tuple[CardiacVAE, TrainHistory]:
    """Returns the best-validation model (eval mode) and the epoch history.

    The returned model's conditional latent law is calibrated on the
    training split, so its generated samples are condition-matched out of
    the box."""
    train_split = _SplitTensors(dataset.split("train"), model_config)
    val_split = _SplitTensors(dataset.split("val"), model_config)

    if model_config.beta != config.beta:
        model_config = ModelConfig(
            grid_dims=model_config.grid_dims,
            t_frames=model_config.t_frames,
            z0_dim=model_config.z0_dim,
            zc_dim=model_config.zc_dim,
            channels=model_config.channels,
            embed_hidden=model_config.embed_hidden,
            beta=config.beta,
            bounds=model_config.bounds,
        )

    model = init_parameters(CardiacVAE(model_config), seed=config.seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.lr)
    shuffle_gen = torch.Generator().manual_seed(config.seed + 1)
    eps_gen = torch.Generator().manual_seed(config.seed + 2)

    if config.history_path:
        Path(config.history_path).parent.mkdir(parents=True, exist_ok=True)
        Path(config.history_path).write_text("")

    history = TrainHistory()
    best_state = copy.deepcopy(model.state_dict())
    wait = 0
    for epoch in range(1, config.epochs + 1):
        t0 = time.monotonic()
        lr_now = config.lr * _lr_factor(config.lr_schedule, epoch, config.epochs)
        for group in optimizer.param_groups:
            group["lr"] = lr_now
        beta_now = config.beta * _beta_factor(epoch, config.beta_warmup_epochs)
        model.train()
        order = torch.randperm(train_split.n, generator=shuffle_gen)
        try:
            train_stats = _epoch_pass(model, train_split, config, optimizer, eps_gen, order, beta=beta_now)
            model.eval()
            with torch.no_grad():
                # validation always scores at the target KL weight so epoch
                # totals stay comparable for best-weights selection
                val_stats = _epoch_pass(model, val_split, config)
        except (ValueError, RolloutError) as exc:
            raise TrainingError(f"epoch {epoch}: {exc}") from exc
        history.append(
            EpochRecord(epoch, train_stats, val_stats, time.monotonic() - t0),
            config.history_path,
        )
        if val_stats["total"] < history.best_val_total:
            history.best_val_total = val_stats["total"]
            history.best_epoch = epoch
            best_state = copy.deepcopy(model.state_dict())
            wait = 0
        else:
            wait += 1
            if wait > config.patience:
                break

    model.load_state_dict(best_state)
    calibrate_latent_prior(model, dataset.split("train"))
    model.eval()
    return model, history
