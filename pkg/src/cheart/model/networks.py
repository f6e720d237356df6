"""Network architecture: condition embedder, encoder, temporal cell, decoder.

The encoder runs four strided 3-D convolution stages (kernel 4, stride 2)
and concatenates the condition code to the flattened feature before the
posterior heads. The decoder mirrors it with transposed convolutions from
the 64-dim per-frame latent. A single shared-weight LSTM cell unrolls the
latent through the cycle, step 0 being the concatenated code itself.

Grid axes must be powers of two. An axis is halved per stage while it is
still at least 2 voxels wide; once it reaches 1 the stage leaves it alone
(kernel 1, stride 1), which keeps the architecture valid on miniature grids
used by gradient checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import torch
from torch import nn

from ..datakit.types import CONDITION_VECTOR_DIM, N_CLASSES, NormalizationBounds
from ..errors import RolloutError, ShapeError

N_CONV_STAGES = 4
CONV_KERNEL = 4  # per downsampled axis


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class ModelConfig:
    grid_dims: tuple[int, int, int] = (32, 32, 16)
    t_frames: int = 8
    z0_dim: int = 32
    zc_dim: int = 32
    channels: tuple[int, int, int, int] = (16, 32, 64, 128)
    embed_hidden: int = 32
    beta: float = 0.001
    bounds: NormalizationBounds = field(default_factory=NormalizationBounds)

    def __post_init__(self):
        if len(self.grid_dims) != 3 or any(not _is_pow2(d) or d < 2 for d in self.grid_dims):
            raise ValueError(f"grid dims must be powers of two >= 2, got {self.grid_dims}")
        if self.t_frames < 1:
            raise ValueError("t_frames must be >= 1")
        if self.z0_dim < 1 or self.zc_dim < 1:
            raise ValueError("latent dims must be positive")
        if len(self.channels) != N_CONV_STAGES:
            raise ValueError(f"need {N_CONV_STAGES} channel counts, got {self.channels}")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")

    @property
    def zc0_dim(self) -> int:
        return self.z0_dim + self.zc_dim

    def as_dict(self) -> dict:
        return {
            "grid_dims": list(self.grid_dims),
            "t_frames": self.t_frames,
            "z0_dim": self.z0_dim,
            "zc_dim": self.zc_dim,
            "channels": list(self.channels),
            "embed_hidden": self.embed_hidden,
            "beta": self.beta,
            "normalization_bounds": self.bounds.as_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(
            grid_dims=tuple(d["grid_dims"]),
            t_frames=int(d["t_frames"]),
            z0_dim=int(d["z0_dim"]),
            zc_dim=int(d["zc_dim"]),
            channels=tuple(d["channels"]),
            embed_hidden=int(d["embed_hidden"]),
            beta=float(d["beta"]),
            bounds=NormalizationBounds.from_dict(d["normalization_bounds"]),
        )


def conv_stage_plan(grid_dims) -> tuple[list[dict], list[tuple[int, int, int]]]:
    """Per-stage convolution geometry and the feature dims after each stage."""
    dims = tuple(grid_dims)
    stages, trace = [], []
    for _ in range(N_CONV_STAGES):
        kernel = tuple(CONV_KERNEL if d >= 2 else 1 for d in dims)
        stride = tuple(2 if d >= 2 else 1 for d in dims)
        padding = tuple(1 if d >= 2 else 0 for d in dims)
        dims = tuple(max(d // 2, 1) for d in dims)
        stages.append({"kernel": kernel, "stride": stride, "padding": padding})
        trace.append(dims)
    return stages, trace


class ConditionEmbedder(nn.Module):
    """MLP from the raw condition vector to the condition code zc."""

    def __init__(self, zc_dim: int, hidden: int):
        super().__init__()
        self.net = nn.Sequential(
            nn.Linear(CONDITION_VECTOR_DIM, hidden),
            nn.ELU(),
            nn.Linear(hidden, zc_dim),
        )

    def forward(self, cvec: torch.Tensor) -> torch.Tensor:
        if cvec.shape[-1] != CONDITION_VECTOR_DIM:
            raise ShapeError(f"condition vector must have {CONDITION_VECTOR_DIM} entries, got {cvec.shape}")
        return self.net(cvec)


class Encoder(nn.Module):
    """Strided conv stack plus posterior heads over [features, zc]."""

    LOG_VAR_RANGE = (-10.0, 10.0)

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        stages, trace = conv_stage_plan(config.grid_dims)
        convs = []
        in_ch = N_CLASSES
        for stage, out_ch in zip(stages, config.channels):
            convs.append(nn.Conv3d(in_ch, out_ch, stage["kernel"], stage["stride"], stage["padding"]))
            convs.append(nn.ELU())
            in_ch = out_ch
        self.convs = nn.Sequential(*convs)
        self.feature_dims = trace[-1]
        self.flat_dim = config.channels[-1] * math.prod(self.feature_dims)
        self.mu_head = nn.Linear(self.flat_dim + config.zc_dim, config.z0_dim)
        self.log_var_head = nn.Linear(self.flat_dim + config.zc_dim, config.z0_dim)

    def forward(self, x0: torch.Tensor, zc: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        expected = (N_CLASSES, *self.config.grid_dims)
        if x0.shape[-4:] != expected:
            raise ShapeError(f"encoder input must end in {expected}, got {tuple(x0.shape)}")
        squeeze = x0.dim() == 4
        if squeeze:
            x0 = x0.unsqueeze(0)
            zc = zc.unsqueeze(0)
        h = self.convs(x0).flatten(1)
        h = torch.cat([h, zc], dim=1)
        mu = self.mu_head(h)
        log_var = self.log_var_head(h).clamp(*self.LOG_VAR_RANGE)
        if squeeze:
            mu, log_var = mu.squeeze(0), log_var.squeeze(0)
        return mu, log_var


class Decoder(nn.Module):
    """Dense unflatten followed by four transposed conv stages to class logits."""

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        stages, trace = conv_stage_plan(config.grid_dims)
        self.feature_dims = trace[-1]
        self.flat_dim = config.channels[-1] * math.prod(self.feature_dims)
        self.fc = nn.Linear(config.zc0_dim, self.flat_dim)
        deconvs = []
        out_channels = list(config.channels[:-1][::-1]) + [N_CLASSES]
        in_ch = config.channels[-1]
        for stage, out_ch in zip(stages[::-1], out_channels):
            deconvs.append(nn.ELU())
            deconvs.append(
                nn.ConvTranspose3d(in_ch, out_ch, stage["kernel"], stage["stride"], stage["padding"])
            )
            in_ch = out_ch
        self.deconvs = nn.Sequential(*deconvs)

    def forward(self, zct: torch.Tensor) -> torch.Tensor:
        if zct.shape[-1] != self.config.zc0_dim:
            raise ShapeError(f"decoder input must have {self.config.zc0_dim} entries, got {zct.shape}")
        squeeze = zct.dim() == 1
        if squeeze:
            zct = zct.unsqueeze(0)
        h = self.fc(zct).reshape(-1, self.config.channels[-1], *self.feature_dims)
        logits = self.deconvs(h)
        if squeeze:
            logits = logits.squeeze(0)
        return logits


class TemporalModule(nn.Module):
    """One-to-many rollout: a single LSTM cell shared across steps."""

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.dim = config.zc0_dim
        self.cell = nn.LSTMCell(self.dim, self.dim)
        self.head = nn.Linear(self.dim, self.dim)

    def forward(self, zc0: torch.Tensor, t_frames: int) -> torch.Tensor:
        if t_frames < 1:
            raise ValueError("rollout needs t_frames >= 1")
        squeeze = zc0.dim() == 1
        if squeeze:
            zc0 = zc0.unsqueeze(0)
        batch = zc0.shape[0]
        h = zc0.new_zeros(batch, self.dim)
        c = zc0.new_zeros(batch, self.dim)
        rows = [zc0]
        for t in range(1, t_frames):
            h, c = self.cell(rows[-1], (h, c))
            z = self.head(h)
            if not torch.isfinite(z).all():
                raise RolloutError(t)
            rows.append(z)
        traj = torch.stack(rows, dim=1)
        if squeeze:
            traj = traj.squeeze(0)
        return traj


class CardiacVAE(nn.Module):
    """Full conditional model: embed, encode, reparameterize, roll out, decode."""

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        self.embedder = ConditionEmbedder(config.zc_dim, config.embed_hidden)
        self.encoder = Encoder(config)
        self.decoder = Decoder(config)
        self.temporal = TemporalModule(config)
        # conditional latent law fitted after training (identity until then):
        # an affine map from the condition vector to the latent location plus
        # a per-dimension residual spread
        self.register_buffer("z0_cond_weight", torch.zeros(CONDITION_VECTOR_DIM + 1, config.z0_dim))
        self.register_buffer("z0_resid_scale", torch.ones(config.z0_dim))

    def embed(self, cvec: torch.Tensor) -> torch.Tensor:
        return self.embedder(cvec)

    def conditional_latent(self, cvec: torch.Tensor, eps: torch.Tensor) -> torch.Tensor:
        """Map unit-normal draws to condition-matched latent samples.

        Before calibration the buffers hold the identity law and this
        returns `eps` unchanged.
        """
        design = torch.cat([cvec, torch.ones(*cvec.shape[:-1], 1)], dim=-1)
        return design @ self.z0_cond_weight + self.z0_resid_scale * eps

    def encode(self, x0: torch.Tensor, zc: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        return self.encoder(x0, zc)

    @staticmethod
    def reparameterize(mu: torch.Tensor, log_var: torch.Tensor, eps: torch.Tensor) -> torch.Tensor:
        return mu + torch.exp(0.5 * log_var) * eps

    def rollout(self, z0: torch.Tensor, zc: torch.Tensor, t_frames: int | None = None) -> torch.Tensor:
        zc0 = torch.cat([z0, zc], dim=-1)
        return self.temporal(zc0, t_frames or self.config.t_frames)

    def decode(self, zct: torch.Tensor) -> torch.Tensor:
        return self.decoder(zct)

    def decode_trajectory(self, traj: torch.Tensor) -> torch.Tensor:
        """Latent rows (..., T, 64) to per-frame logits (..., T, C, X, Y, Z)."""
        squeeze = traj.dim() == 2
        if squeeze:
            traj = traj.unsqueeze(0)
        batch, t_frames = traj.shape[0], traj.shape[1]
        logits = self.decoder(traj.reshape(batch * t_frames, -1))
        logits = logits.reshape(batch, t_frames, *logits.shape[1:])
        if squeeze:
            logits = logits.squeeze(0)
        return logits

    def forward(
        self, x0: torch.Tensor, cvec: torch.Tensor, eps: torch.Tensor
    ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
        """Returns (per-frame logits, mu, log_var, latent trajectory)."""
        zc = self.embedder(cvec)
        mu, log_var = self.encoder(x0, zc)
        z0 = self.reparameterize(mu, log_var, eps)
        traj = self.rollout(z0, zc)
        logits = self.decode_trajectory(traj)
        return logits, mu, log_var, traj


def init_parameters(model: nn.Module, seed: int) -> nn.Module:
    """Deterministic parameter init from an explicit generator.

    Weight matrices and kernels get Kaiming-uniform draws in sorted parameter
    name order; biases start at zero. Keeping the draw order fixed makes the
    init reproducible regardless of module construction details.
    """
    gen = torch.Generator().manual_seed(seed)
    for name, p in sorted(model.named_parameters(), key=lambda kv: kv[0]):
        with torch.no_grad():
            if p.dim() >= 2:
                nn.init.kaiming_uniform_(p, a=math.sqrt(5), generator=gen)
            else:
                p.zero_()
    return model
