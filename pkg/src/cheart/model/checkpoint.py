"""Checkpoint archive: model.json metadata plus raw parameter arrays.

A checkpoint is a plain zip (stored, not compressed) with every parameter
tensor as a little-endian raw array under params/ and every persistent
buffer (the fitted latent law) under buffers/. Entries are written in
sorted order with a fixed timestamp, so saving the same model twice yields
byte-identical files; checkpoint hashes are meaningful.
"""
from __future__ import annotations

import io
import json
import zipfile
from pathlib import Path

import numpy as np
import torch

from ..errors import CheckpointError
from .networks import CardiacVAE, ModelConfig

CHECKPOINT_FORMAT_VERSION = 2

_FIXED_DATE = (1980, 1, 1, 0, 0, 0)
_DTYPES = {"float32": np.float32, "float64": np.float64}


def _write_entry(zf: zipfile.ZipFile, name: str, payload: bytes):
    info = zipfile.ZipInfo(name, date_time=_FIXED_DATE)
    info.compress_type = zipfile.ZIP_STORED
    info.external_attr = 0o644 << 16
    zf.writestr(info, payload)


def save_checkpoint(model: CardiacVAE, path, extra_meta: dict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    params = {name: p.detach().cpu().numpy() for name, p in model.named_parameters()}
    dtype = str(next(iter(params.values())).dtype) if params else "float32"
    meta = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "config": model.config.as_dict(),
        "dtype": dtype,
        "parameters": {name: list(arr.shape) for name, arr in sorted(params.items())},
    }
    if extra_meta:
        overlap = set(extra_meta) & set(meta)
        if overlap:
            raise ValueError(f"extra_meta may not override reserved keys {sorted(overlap)}")
        meta.update(extra_meta)

    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_STORED) as zf:
        _write_entry(zf, "model.json", json.dumps(meta, indent=2, sort_keys=True).encode())
        for name, arr in sorted(params.items()):
            _write_entry(zf, f"params/{name}.raw", np.ascontiguousarray(arr).tobytes())
    path.write_bytes(buf.getvalue())
    return path


def load_checkpoint(path, expect_grid_dims=None) -> tuple[CardiacVAE, dict]:
    """Rebuild the model from an archive. Returns (model in eval mode, metadata)."""
    path = Path(path)
    if not path.is_file():
        raise CheckpointError(f"checkpoint {path} does not exist")
    try:
        zf = zipfile.ZipFile(path)
    except zipfile.BadZipFile as exc:
        raise CheckpointError(f"{path} is not a checkpoint archive: {exc}") from exc
    with zf:
        names = set(zf.namelist())
        if "model.json" not in names:
            raise CheckpointError(f"{path}: missing model.json")
        try:
            meta = json.loads(zf.read("model.json"))
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"{path}: unparseable model.json: {exc}") from exc
        version = meta.get("format_version")
        if version != CHECKPOINT_FORMAT_VERSION:
            raise CheckpointError(
                f"{path}: unsupported format_version {version!r} (expected {CHECKPOINT_FORMAT_VERSION})"
            )
        try:
            config = ModelConfig.from_dict(meta["config"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointError(f"{path}: invalid model config ({exc})") from exc
        if expect_grid_dims is not None and tuple(expect_grid_dims) != config.grid_dims:
            raise CheckpointError(
                f"{path}: checkpoint grid dims {config.grid_dims} != requested {tuple(expect_grid_dims)}"
            )
        np_dtype = _DTYPES.get(meta.get("dtype", "float32"))
        if np_dtype is None:
            raise CheckpointError(f"{path}: unknown parameter dtype {meta.get('dtype')!r}")

        model = CardiacVAE(config)
        if np_dtype == np.float64:
            model.double()
        declared = meta.get("parameters", {})
        model_params = dict(model.named_parameters())
        if set(declared) != set(model_params):
            missing = sorted(set(model_params) - set(declared))
            extra = sorted(set(declared) - set(model_params))
            raise CheckpointError(f"{path}: parameter set mismatch (missing {missing}, extra {extra})")
        with torch.no_grad():
            for name, param in model_params.items():
                entry = f"params/{name}.raw"
                if entry not in names:
                    raise CheckpointError(f"{path}: missing array {entry}")
                shape = tuple(declared[name])
                if shape != tuple(param.shape):
                    raise CheckpointError(
                        f"{path}: {name} has shape {shape}, model expects {tuple(param.shape)}"
                    )
                raw = zf.read(entry)
                expected_bytes = int(np.prod(shape)) * np.dtype(np_dtype).itemsize
                if len(raw) != expected_bytes:
                    raise CheckpointError(
                        f"{path}: {entry} holds {len(raw)} bytes, expected {expected_bytes}"
                    )
                arr = np.frombuffer(raw, dtype=np_dtype).reshape(shape)
                param.copy_(torch.from_numpy(arr.copy()))
    model.eval()
    return model, meta
