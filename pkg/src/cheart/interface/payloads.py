"""Wire encoding for label sequences.

Frames travel as base64 strings, either of the raw uint8 voxel payload or
of a run-length encoding. Runs are (value u8, length u32 little-endian)
pairs; label volumes are mostly long constant runs, so this shrinks large
grids by two orders of magnitude.
"""

from __future__ import annotations

import base64
import struct

import numpy as np

from ..datakit.types import AnatomySequence, SegVolume
from ..metrics.phenotypes import phenotypes

CODECS = ("raw_b64", "rle_b64")


def _rle_encode(flat: np.ndarray) -> bytes:
    boundaries = np.flatnonzero(np.diff(flat)) + 1
    starts = np.concatenate([[0], boundaries])
    ends = np.concatenate([boundaries, [flat.size]])
    out = bytearray()
    for s, e in zip(starts, ends):
        out += struct.pack("<BI", int(flat[s]), int(e - s))
    return bytes(out)


def _rle_decode(payload: bytes) -> np.ndarray:
    if len(payload) % 5 != 0:
        raise ValueError(f"run-length payload must be a multiple of 5 bytes, got {len(payload)}")
    pairs = np.frombuffer(payload, dtype=np.dtype([("value", "u1"), ("count", "<u4")]))
    return np.repeat(pairs["value"], pairs["count"])


def encode_frame(labels: np.ndarray, codec: str) -> str:
    if codec == "raw_b64":
        raw = np.ascontiguousarray(labels, dtype=np.uint8).tobytes()
    elif codec == "rle_b64":
        raw = _rle_encode(np.ascontiguousarray(labels, dtype=np.uint8).ravel())
    else:
        raise ValueError(f"codec must be one of {CODECS}, got {codec!r}")
    return base64.b64encode(raw).decode("ascii")


def decode_frame(data: str, codec: str, dims) -> np.ndarray:
    try:
        raw = base64.b64decode(data, validate=True)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"frame is not valid base64: {exc}") from exc
    if codec == "raw_b64":
        flat = np.frombuffer(raw, dtype=np.uint8)
    elif codec == "rle_b64":
        flat = _rle_decode(raw)
    else:
        raise ValueError(f"codec must be one of {CODECS}, got {codec!r}")
    n = int(np.prod(dims))
    if flat.size != n:
        raise ValueError(f"frame decodes to {flat.size} voxels, dims {tuple(dims)} require {n}")
    return flat.reshape(tuple(dims)).copy()


def sequence_to_payload(seq: AnatomySequence, codec: str = "raw_b64") -> dict:
    """Sequence plus its phenotypes (None when the sample has no LV)."""
    try:
        pheno = phenotypes(seq).as_dict()
    except ValueError:
        pheno = None
    return {
        "dims": list(seq.dims),
        "spacing_mm": list(seq.spacing),
        "t_frames": seq.t_frames,
        "frame_period_s": seq.frame_period_s,
        "codec": codec,
        "frames": [encode_frame(f.labels, codec) for f in seq.frames],
        "phenotypes": pheno,
    }


def payload_to_sequence(payload: dict) -> AnatomySequence:
    try:
        dims = tuple(int(d) for d in payload["dims"])
        spacing = tuple(float(s) for s in payload["spacing_mm"])
        t_frames = int(payload["t_frames"])
        frame_period_s = float(payload["frame_period_s"])
        codec = payload["codec"]
        frames_b64 = payload["frames"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed sequence payload: {exc}") from exc
    if len(frames_b64) != t_frames:
        raise ValueError(f"payload lists {len(frames_b64)} frames but t_frames={t_frames}")
    frames = [SegVolume(decode_frame(b64, codec, dims), spacing) for b64 in frames_b64]
    return AnatomySequence(frames, frame_period_s)


def volume_to_payload(volume: SegVolume, codec: str = "raw_b64") -> dict:
    return {
        "dims": list(volume.dims),
        "spacing_mm": list(volume.spacing),
        "codec": codec,
        "frame": encode_frame(volume.labels, codec),
    }


def payload_to_volume(payload: dict) -> SegVolume:
    try:
        dims = tuple(int(d) for d in payload["dims"])
        spacing = tuple(float(s) for s in payload["spacing_mm"])
        codec = payload["codec"]
        frame = payload["frame"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed volume payload: {exc}") from exc
    return SegVolume(decode_frame(frame, codec, dims), spacing)
