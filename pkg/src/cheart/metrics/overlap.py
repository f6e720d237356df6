"""Overlap and surface-distance metrics between label volumes.

Surface distances are measured between boundary voxel centers. A voxel is a
boundary voxel if it belongs to the mask and at least one of its six face
neighbors does not (voxels on the grid border count, the outside being
background). Distances are Euclidean in physical mm, honoring anisotropic
spacing, and are exact: nearest distances come from a distance transform of
the boundary map.
"""
from __future__ import annotations

import numpy as np
from scipy import ndimage

from ..datakit.types import SegVolume


def _require_same_grid(a: SegVolume, b: SegVolume):
    if a.dims != b.dims:
        raise ValueError(f"volume dims differ: {a.dims} vs {b.dims}")
    if a.spacing != b.spacing:
        raise ValueError(f"volume spacings differ: {a.spacing} vs {b.spacing}")


def dice(a: SegVolume, b: SegVolume, label: int) -> float:
    """Dice overlap of one label. Both masks empty gives 1, exactly one empty gives 0."""
    _require_same_grid(a, b)
    ma = a.labels == label
    mb = b.labels == label
    na, nb = int(ma.sum()), int(mb.sum())
    if na == 0 and nb == 0:
        return 1.0
    return 2.0 * int((ma & mb).sum()) / (na + nb)


_FACE_STRUCTURE = ndimage.generate_binary_structure(3, 1)


def _boundary(mask: np.ndarray) -> np.ndarray:
    interior = ndimage.binary_erosion(mask, structure=_FACE_STRUCTURE, border_value=0)
    return mask & ~interior


def surface_distances(a: SegVolume, b: SegVolume, label: int) -> tuple[np.ndarray, np.ndarray]:
    """Directed boundary distances (a to b, b to a) in mm, one entry per boundary voxel."""
    _require_same_grid(a, b)
    ma = a.labels == label
    mb = b.labels == label
    if not ma.any() or not mb.any():
        raise ValueError(f"surface distance undefined: label {label} empty in at least one volume")
    ba = _boundary(ma)
    bb = _boundary(mb)
    dist_to_bb = ndimage.distance_transform_edt(~bb, sampling=a.spacing)
    dist_to_ba = ndimage.distance_transform_edt(~ba, sampling=a.spacing)
    return dist_to_bb[ba], dist_to_ba[bb]


def hausdorff(a: SegVolume, b: SegVolume, label: int) -> float:
    """Symmetric Hausdorff distance in mm between the two label boundaries."""
    d_ab, d_ba = surface_distances(a, b, label)
    return float(max(d_ab.max(), d_ba.max()))


def assd(a: SegVolume, b: SegVolume, label: int) -> float:
    """Average symmetric surface distance in mm: mean of the two directed averages."""
    d_ab, d_ba = surface_distances(a, b, label)
    return float(0.5 * (d_ab.mean() + d_ba.mean()))
