"""Linear subspace baseline for sequence completion.

Fits principal components over flattened one-hot cardiac cycles and
completes a sequence from its first frame by solving a least-squares
problem on the observed sub-vector. Conditions play no role here; the
profile argument exists only so the completer signature lines up with
the neural model's.
"""

from __future__ import annotations

import json
import zipfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..datakit.io import N_CLASSES, one_hot
from ..datakit.types import AnatomySequence, SegVolume
from ..errors import CheckpointError
from ..model.checkpoint import _write_entry

PCA_FORMAT_VERSION = 1

# eigenvalues below max * this are treated as rank deficiency, not structure
_RANK_RTOL = 1e-10

_RIDGE = 1e-6


@dataclass(frozen=True)
class PCAModel:
    mean: np.ndarray  # (D,)
    components: np.ndarray  # (k, D), orthonormal rows
    explained_variance: np.ndarray  # (k,), non-increasing
    grid_dims: tuple
    t_frames: int
    frame_period_s: float

    def __post_init__(self):
        k, d = self.components.shape
        if self.mean.shape != (d,):
            raise ValueError(f"mean has {self.mean.shape[0]} entries, components have {d}")
        if self.explained_variance.shape != (k,):
            raise ValueError("one explained-variance entry per component required")
        if d != self.t_frames * self.frame0_len:
            raise ValueError("component length does not match t_frames * frame volume")

    @property
    def k(self) -> int:
        return self.components.shape[0]

    @property
    def frame0_len(self) -> int:
        """Length of the frame-0 block at the start of a flattened cycle."""
        x, y, z = self.grid_dims
        return N_CLASSES * x * y * z


def _flatten_sequence(seq: AnatomySequence) -> np.ndarray:
    return np.concatenate([one_hot(f).ravel() for f in seq.frames]).astype(np.float64)


def pca_fit(records, k: int) -> PCAModel:
    """Top-k principal components of the train split's flattened cycles.

    Computed through the n x n Gram matrix, so the voxel count never enters
    an eigenproblem. Rank-deficient directions (eigenvalue ~ 0) are dropped,
    which can leave fewer than k components.
    """
    if not records:
        raise ValueError("no records to fit")
    dims = records[0].sequence.dims
    t_frames = records[0].sequence.t_frames
    for rec in records:
        if rec.sequence.dims != dims or rec.sequence.t_frames != t_frames:
            raise ValueError(f"subject {rec.subject_id} does not match the first subject's grid")
    n = len(records)
    d = t_frames * N_CLASSES * int(np.prod(dims))
    if k < 0 or k > min(n, d):
        raise ValueError(f"k must be in [0, {min(n, d)}], got {k}")

    data = np.stack([_flatten_sequence(rec.sequence) for rec in records])
    mean = data.mean(axis=0)
    centered = data - mean

    gram = centered @ centered.T
    eigvals, eigvecs = np.linalg.eigh(gram)
    order = np.argsort(eigvals)[::-1]
    eigvals, eigvecs = eigvals[order], eigvecs[:, order]

    keep = eigvals > max(eigvals[0], 0.0) * _RANK_RTOL
    eigvals, eigvecs = eigvals[keep], eigvecs[:, keep]
    if k < eigvals.size:
        eigvals, eigvecs = eigvals[:k], eigvecs[:, :k]

    # singular value scaling turns Gram eigenvectors into unit data-space rows
    components = (centered.T @ (eigvecs / np.sqrt(eigvals))).T if eigvals.size else np.zeros((0, d))
    return PCAModel(
        mean=mean,
        components=np.ascontiguousarray(components),
        explained_variance=eigvals / max(n - 1, 1),
        grid_dims=dims,
        t_frames=t_frames,
        frame_period_s=records[0].sequence.frame_period_s,
    )


def pca_complete(model: PCAModel, x0: SegVolume, profile=None) -> AnatomySequence:
    """Reconstruct the full cycle from frame 0 alone.

    Component weights come from least squares restricted to the frame-0
    block of the flattened representation; the profile is ignored.
    """
    if x0.dims != model.grid_dims:
        raise ValueError(f"frame grid {x0.dims} does not match model grid {model.grid_dims}")
    d0 = model.frame0_len
    observed = one_hot(x0).ravel().astype(np.float64) - model.mean[:d0]
    block = model.components[:, :d0]  # (k, d0)

    if model.k == 0:
        recon = model.mean
    else:
        normal = block @ block.T
        rhs = block @ observed
        try:
            weights = np.linalg.solve(normal, rhs)
        except np.linalg.LinAlgError:
            weights = np.linalg.solve(normal + _RIDGE * np.eye(model.k), rhs)
        if not np.all(np.isfinite(weights)):
            weights = np.linalg.solve(normal + _RIDGE * np.eye(model.k), rhs)
        recon = model.mean + weights @ model.components

    per_frame = recon.reshape(model.t_frames, N_CLASSES, *model.grid_dims)
    labels = per_frame.argmax(axis=1).astype(np.uint8)
    frames = [SegVolume(frame, x0.spacing) for frame in labels]
    return AnatomySequence(frames, model.frame_period_s)


def make_pca_completer(model: PCAModel):
    """Adapter matching the evaluation suite's completer signature."""

    def completer(x0: SegVolume, profile) -> AnatomySequence:
        return pca_complete(model, x0, profile)

    return completer


def save_pca(model: PCAModel, path) -> Path:
    """Write the model as a zip of raw arrays plus a JSON manifest.

    Byte-identical for identical models: entries are stored uncompressed
    in a fixed order with fixed timestamps.
    """
    path = Path(path)
    meta = {
        "format_version": PCA_FORMAT_VERSION,
        "kind": "pca",
        "k": model.k,
        "grid_dims": list(model.grid_dims),
        "t_frames": model.t_frames,
        "frame_period_s": model.frame_period_s,
    }
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_STORED) as zf:
        _write_entry(zf, "model.json", json.dumps(meta, sort_keys=True, indent=1).encode())
        _write_entry(zf, "arrays/mean.raw", np.ascontiguousarray(model.mean, np.float64).tobytes())
        _write_entry(
            zf, "arrays/components.raw", np.ascontiguousarray(model.components, np.float64).tobytes()
        )
        _write_entry(
            zf,
            "arrays/explained_variance.raw",
            np.ascontiguousarray(model.explained_variance, np.float64).tobytes(),
        )
    return path


def load_pca(path) -> PCAModel:
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"no file at {path}")
    try:
        with zipfile.ZipFile(path) as zf:
            meta = json.loads(zf.read("model.json"))
            raw = {name: zf.read(f"arrays/{name}.raw") for name in ("mean", "components", "explained_variance")}
    except (zipfile.BadZipFile, KeyError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"unreadable model file {path}: {exc}") from exc
    if meta.get("kind") != "pca":
        raise CheckpointError(f"{path} is not a PCA model file")
    if meta.get("format_version") != PCA_FORMAT_VERSION:
        raise CheckpointError(
            f"format version {meta.get('format_version')} unsupported (expected {PCA_FORMAT_VERSION})"
        )
    dims = tuple(meta["grid_dims"])
    t_frames = int(meta["t_frames"])
    d = t_frames * N_CLASSES * int(np.prod(dims))
    k = int(meta["k"])
    mean = np.frombuffer(raw["mean"], np.float64)
    components = np.frombuffer(raw["components"], np.float64)
    ev = np.frombuffer(raw["explained_variance"], np.float64)
    if mean.size != d or components.size != k * d or ev.size != k:
        raise CheckpointError(f"array sizes in {path} do not match the manifest")
    return PCAModel(
        mean=mean.copy(),
        components=components.reshape(k, d).copy(),
        explained_variance=ev.copy(),
        grid_dims=dims,
        t_frames=t_frames,
        frame_period_s=float(meta["frame_period_s"]),
    )
