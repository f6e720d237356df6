"""Dataset persistence and label/probability conversions.

On-disk layout, one directory per subject grouped by split:

    <root>/<split>/<subject_id>/frame_{t:03d}.u8raw   raw little-endian uint8 labels, C order
    <root>/<split>/<subject_id>/meta.json             dims, spacing, timing, conditions

The format is deliberately raw-plus-JSON so a phantom can be inspected with
nothing but a hex viewer and a text editor.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import DatasetFormatError
from .types import (
    N_CLASSES,
    SPLITS,
    AnatomySequence,
    ConditionProfile,
    Dataset,
    SegVolume,
    SubjectRecord,
)

FORMAT_VERSION = 1


def one_hot(volume, n_classes: int = N_CLASSES) -> np.ndarray:
    """Labels to a channel-first (n_classes, X, Y, Z) float32 probability volume."""
    labels = volume.labels if isinstance(volume, SegVolume) else np.asarray(volume)
    if labels.max(initial=0) >= n_classes:
        raise ValueError(f"labels exceed n_classes={n_classes}")
    flat = np.eye(n_classes, dtype=np.float32)[labels.reshape(-1)]
    return np.moveaxis(flat.reshape(labels.shape + (n_classes,)), -1, 0)


def decode_labels(prob: np.ndarray, spacing) -> SegVolume:
    """Per-voxel argmax over the channel axis; ties resolve to the lowest class id."""
    prob = np.asarray(prob)
    if prob.ndim != 4:
        raise ValueError(f"expected (C, X, Y, Z) probabilities, got shape {prob.shape}")
    return SegVolume(np.argmax(prob, axis=0).astype(np.uint8), spacing)


def _meta_dict(seq: AnatomySequence, profile: ConditionProfile | None) -> dict:
    meta = {
        "dims": list(seq.dims),
        "spacing_mm": list(seq.spacing),
        "t_frames": seq.t_frames,
        "frame_period_s": seq.frame_period_s,
        "conditions": profile.as_dict() if profile is not None else None,
        "format_version": FORMAT_VERSION,
    }
    return meta


def save_sequence(seq: AnatomySequence, profile: ConditionProfile | None, directory) -> Path:
    """Write one subject directory (frames + meta.json). Returns the directory."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for t, frame in enumerate(seq.frames):
        (directory / f"frame_{t:03d}.u8raw").write_bytes(frame.labels.tobytes())
    meta = _meta_dict(seq, profile)
    (directory / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return directory


def load_sequence(directory) -> tuple[AnatomySequence, ConditionProfile | None]:
    directory = Path(directory)
    meta_path = directory / "meta.json"
    if not meta_path.is_file():
        raise DatasetFormatError(f"missing meta.json in {directory}")
    try:
        meta = json.loads(meta_path.read_text())
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"unparseable meta.json in {directory}: {exc}") from exc
    version = meta.get("format_version")
    if version != FORMAT_VERSION:
        raise DatasetFormatError(f"{directory}: unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    try:
        dims = tuple(int(d) for d in meta["dims"])
        spacing = tuple(float(s) for s in meta["spacing_mm"])
        t_frames = int(meta["t_frames"])
        frame_period_s = float(meta["frame_period_s"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DatasetFormatError(f"{directory}: malformed meta.json ({exc})") from exc

    n_voxels = int(np.prod(dims))
    frames = []
    for t in range(t_frames):
        frame_path = directory / f"frame_{t:03d}.u8raw"
        if not frame_path.is_file():
            raise DatasetFormatError(f"missing frame file {frame_path}")
        payload = frame_path.read_bytes()
        if len(payload) != n_voxels:
            raise DatasetFormatError(
                f"{frame_path}: payload is {len(payload)} bytes but dims {dims} require {n_voxels}"
            )
        labels = np.frombuffer(payload, dtype=np.uint8).reshape(dims)
        if labels.max(initial=0) >= N_CLASSES:
            raise DatasetFormatError(f"{frame_path}: contains labels outside 0..{N_CLASSES - 1}")
        frames.append(SegVolume(labels.copy(), spacing))

    profile = None
    if meta.get("conditions") is not None:
        try:
            profile = ConditionProfile.from_dict(meta["conditions"])
        except (KeyError, ValueError) as exc:
            raise DatasetFormatError(f"{directory}: invalid conditions block ({exc})") from exc
    return AnatomySequence(frames, frame_period_s), profile


def save_dataset(dataset: Dataset, path) -> Path:
    """Write the whole dataset under `path`, one directory per subject."""
    root = Path(path)
    for record in dataset.records:
        save_sequence(record.sequence, record.profile, root / record.split / record.subject_id)
    return root


def load_dataset(path) -> Dataset:
    root = Path(path)
    if not root.is_dir():
        raise DatasetFormatError(f"dataset root {root} does not exist")
    records = []
    for split in SPLITS:
        split_dir = root / split
        if not split_dir.is_dir():
            continue
        for subject_dir in sorted(p for p in split_dir.iterdir() if p.is_dir()):
            seq, profile = load_sequence(subject_dir)
            if profile is None:
                raise DatasetFormatError(f"{subject_dir}: dataset subjects must carry conditions")
            records.append(SubjectRecord(subject_dir.name, seq, profile, split))
    if not records:
        raise DatasetFormatError(f"no subjects found under {root}")
    return Dataset(records)
