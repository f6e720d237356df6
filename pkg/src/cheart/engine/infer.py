"""Inference procedures: completion, generation, condition sweeps, latent export."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from ..datakit.conditions import encode_conditions
from ..datakit.io import one_hot
from ..datakit.types import AnatomySequence, ConditionProfile, SegVolume
from ..errors import ShapeError
from ..metrics.phenotypes import PHENOTYPE_FIELDS, PhenotypeRecord, phenotypes
from ..model.networks import CardiacVAE
from .train import DEFAULT_FRAME_PERIOD_S

COMPLETION_MODES = ("posterior_mean", "sample")

SWEEP_FACTORS = {
    "age": "age_years",
    "gender": "gender",
    "weight": "weight_kg",
    "height": "height_cm",
    "sbp": "sbp_mmhg",
}


def _cvec_tensor(model: CardiacVAE, profile: ConditionProfile) -> torch.Tensor:
    vec = encode_conditions(profile, model.config.bounds).values
    return torch.from_numpy(vec.astype(np.float32))


def _x0_tensor(model: CardiacVAE, x0: SegVolume) -> torch.Tensor:
    if x0.dims != model.config.grid_dims:
        raise ShapeError(f"input grid {x0.dims} != model grid {model.config.grid_dims}")
    return torch.from_numpy(one_hot(x0))


def _spacing_for(model: CardiacVAE, x0: SegVolume | None, spacing_mm) -> tuple:
    if spacing_mm is not None:
        return tuple(float(s) for s in spacing_mm)
    if x0 is not None:
        return x0.spacing
    return (5.0, 5.0, 8.0)


def _decode_sequences(
    model: CardiacVAE, trajs: torch.Tensor, spacing, frame_period_s: float,
    chunk: int = 32,
) -> list[AnatomySequence]:
    """Latent rows (n, T, 64) to argmax label sequences.

    Decoded in chunks: the full logits tensor for hundreds of samples
    would dwarf the labels that are actually kept.
    """
    out = []
    with torch.no_grad():
        for start in range(0, trajs.shape[0], chunk):
            logits = model.decode_trajectory(trajs[start : start + chunk])
            labels = logits.argmax(dim=2).to(torch.uint8).numpy()
            for sample in labels:
                frames = [SegVolume(frame, spacing) for frame in sample]
                out.append(AnatomySequence(frames, frame_period_s))
    return out


def complete_sequence(
    model: CardiacVAE,
    x0: SegVolume,
    profile: ConditionProfile,
    mode: str = "posterior_mean",
    seed: int = 0,
    frame_period_s: float = DEFAULT_FRAME_PERIOD_S,
) -> AnatomySequence:
    """Reconstruct the full cycle from the end-diastolic frame and conditions.

    Frame 0 of the result is the model's reconstruction of the input, not a
    copy of it.
    """
    if mode not in COMPLETION_MODES:
        raise ValueError(f"mode must be one of {COMPLETION_MODES}, got {mode!r}")
    with torch.no_grad():
        zc = model.embed(_cvec_tensor(model, profile))
        mu, log_var = model.encode(_x0_tensor(model, x0), zc)
        if mode == "sample":
            eps = torch.randn(model.config.z0_dim, generator=torch.Generator().manual_seed(seed))
            z0 = model.reparameterize(mu, log_var, eps)
        else:
            z0 = mu
        traj = model.rollout(z0, zc)
    return _decode_sequences(model, traj.unsqueeze(0), x0.spacing, frame_period_s)[0]


def generate_sequences(
    model: CardiacVAE,
    profile: ConditionProfile,
    n: int,
    seed: int = 0,
    frame_period_s: float = DEFAULT_FRAME_PERIOD_S,
    spacing_mm=None,
) -> list[AnatomySequence]:
    """Draw n condition-matched samples through the fitted latent law."""
    if n < 1:
        raise ValueError("n must be >= 1")
    gen = torch.Generator().manual_seed(seed)
    eps = torch.randn(n, model.config.z0_dim, generator=gen)
    z0 = model.conditional_latent(_cvec_tensor(model, profile), eps)
    return _generate_from_draws(model, profile, z0, frame_period_s, spacing_mm)


def _generate_from_draws(model, profile, z0: torch.Tensor, frame_period_s, spacing_mm):
    n = z0.shape[0]
    with torch.no_grad():
        zc = model.embed(_cvec_tensor(model, profile)).unsqueeze(0).expand(n, -1)
        traj = model.rollout(z0, zc)
    spacing = _spacing_for(model, None, spacing_mm)
    return _decode_sequences(model, traj, spacing, frame_period_s)


@dataclass
class SweepResult:
    factor: str
    values: list
    sequences: list[list[AnatomySequence]]  # per value, n samples
    phenotypes: list[list[PhenotypeRecord | None]]  # None when a sample has no LV
    mean: dict  # field -> per-value mean over defined samples
    ci_half: dict  # field -> per-value 1.96 * sd / sqrt(n)
    n: int

    def defined_counts(self) -> list[int]:
        return [sum(p is not None for p in per_value) for per_value in self.phenotypes]


def condition_sweep(
    model: CardiacVAE,
    base_profile: ConditionProfile,
    factor: str,
    values,
    n: int = 200,
    seed: int = 0,
    fix_latent: bool = True,
    frame_period_s: float = DEFAULT_FRAME_PERIOD_S,
    spacing_mm=None,
) -> SweepResult:
    """Vary one clinical factor, holding the rest of the profile constant.

    With fix_latent the same n unit draws are reused for every factor
    value, so per-sample differences isolate the condition effect.
    """
    if factor not in SWEEP_FACTORS:
        raise ValueError(f"factor must be one of {sorted(SWEEP_FACTORS)}, got {factor!r}")
    values = list(values)
    if not values:
        raise ValueError("sweep needs at least one value")
    if n < 1:
        raise ValueError("n must be >= 1")

    attr = SWEEP_FACTORS[factor]
    fixed_eps = torch.randn(n, model.config.z0_dim, generator=torch.Generator().manual_seed(seed))
    value_seeds = np.random.SeedSequence(seed).generate_state(len(values), np.uint64)

    sequences, records = [], []
    for i, value in enumerate(values):
        profile_v = base_profile.replace(**{attr: value})
        if fix_latent:
            eps = fixed_eps
        else:
            eps = torch.randn(
                n, model.config.z0_dim, generator=torch.Generator().manual_seed(int(value_seeds[i]))
            )
        z0 = model.conditional_latent(_cvec_tensor(model, profile_v), eps)
        seqs = _generate_from_draws(model, profile_v, z0, frame_period_s, spacing_mm)
        recs = []
        for s in seqs:
            try:
                recs.append(phenotypes(s))
            except ValueError:
                recs.append(None)
        sequences.append(seqs)
        records.append(recs)

    mean, ci_half = {}, {}
    for f in PHENOTYPE_FIELDS:
        means, cis = [], []
        for recs in records:
            vals = np.array([getattr(r, f) for r in recs if r is not None])
            if vals.size == 0:
                means.append(float("nan"))
                cis.append(float("nan"))
                continue
            means.append(float(vals.mean()))
            sd = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
            cis.append(1.96 * sd / np.sqrt(vals.size))
        mean[f] = means
        ci_half[f] = cis
    return SweepResult(factor, values, sequences, records, mean, ci_half, n)


def project_pca2d(codes: np.ndarray) -> tuple[np.ndarray, dict]:
    """Top-2 principal-component projection of row vectors.

    Sign convention: each component's largest-magnitude coefficient is
    positive, so the projection does not depend on SVD implementation
    details. Returns (points (n, 2), fit info).
    """
    codes = np.asarray(codes, dtype=np.float64)
    if codes.ndim != 2 or codes.shape[0] < 1:
        raise ValueError(f"need a (n, d) matrix, got shape {codes.shape}")
    mean = codes.mean(axis=0)
    centered = codes - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    comps = vt[:2] if vt.shape[0] >= 2 else np.vstack([vt, np.zeros((2 - vt.shape[0], vt.shape[1]))])
    for i in range(2):
        j = np.argmax(np.abs(comps[i]))
        if comps[i, j] < 0:
            comps[i] = -comps[i]
    points = centered @ comps.T
    var = s**2 / max(codes.shape[0] - 1, 1)
    total = var.sum()
    explained = [float(v / total) if total > 0 else 0.0 for v in var[:2]]
    while len(explained) < 2:
        explained.append(0.0)
    return points, {"mean": mean, "components": comps, "explained_variance_ratio": explained}


def _trajectory_for(model: CardiacVAE, seq: AnatomySequence, profile: ConditionProfile) -> np.ndarray:
    with torch.no_grad():
        zc = model.embed(_cvec_tensor(model, profile))
        mu, _ = model.encode(_x0_tensor(model, seq.frames[0]), zc)
        traj = model.rollout(mu, zc)
    return traj.numpy()


def export_latent_trajectories(model: CardiacVAE, items, projector: str = "none"):
    """Per-frame latent codes as a table.

    `items` is a list of (sample_id, AnatomySequence, ConditionProfile);
    each sample contributes T rows. Header is
    sample_id, t, z_00..z_63 and, with the pca2d projector, p0, p1.
    """
    if projector not in ("none", "pca2d"):
        raise ValueError(f"projector must be 'none' or 'pca2d', got {projector!r}")
    if not items:
        raise ValueError("nothing to export")
    d = model.config.zc0_dim
    ids, times, codes = [], [], []
    for sample_id, seq, profile in items:
        traj = _trajectory_for(model, seq, profile)
        for t in range(traj.shape[0]):
            ids.append(str(sample_id))
            times.append(t)
            codes.append(traj[t])
    codes = np.asarray(codes)

    header = ["sample_id", "t"] + [f"z_{i:02d}" for i in range(d)]
    rows = [[ids[i], times[i], *codes[i].tolist()] for i in range(len(ids))]
    if projector == "pca2d":
        points, _ = project_pca2d(codes)
        header += ["p0", "p1"]
        for row, pt in zip(rows, points):
            row.extend([float(pt[0]), float(pt[1])])
    return header, rows


def make_completer(model: CardiacVAE, mode: str = "posterior_mean", seed: int = 0,
                   frame_period_s: float = DEFAULT_FRAME_PERIOD_S):
    """Adapter matching the evaluation suite's completer signature."""

    def completer(x0: SegVolume, profile: ConditionProfile) -> AnatomySequence:
        return complete_sequence(model, x0, profile, mode=mode, seed=seed,
                                 frame_period_s=frame_period_s)

    return completer


def make_generator(model: CardiacVAE, frame_period_s: float = DEFAULT_FRAME_PERIOD_S,
                   spacing_mm=None):
    """Adapter matching the evaluation suite's generator signature."""

    def generator(profile: ConditionProfile, n: int, seed: int) -> list[AnatomySequence]:
        return generate_sequences(model, profile, n, seed=seed,
                                  frame_period_s=frame_period_s, spacing_mm=spacing_mm)

    return generator
