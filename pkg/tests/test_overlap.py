import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cheart.datakit.types import SegVolume
from cheart.metrics.overlap import assd, dice, hausdorff, surface_distances

SPACING = (5.0, 5.0, 8.0)


def vol(labels, spacing=SPACING):
    return SegVolume(np.asarray(labels, dtype=np.uint8), spacing)


def block(dims, lo, hi, spacing=SPACING):
    """Volume with label 1 on the half-open box [lo, hi)."""
    labels = np.zeros(dims, dtype=np.uint8)
    labels[lo[0] : hi[0], lo[1] : hi[1], lo[2] : hi[2]] = 1
    return vol(labels, spacing)


def brute_boundary(mask):
    """Independent boundary definition: 6-neighborhood scan with explicit loops."""
    pts = []
    dims = mask.shape
    for x, y, z in zip(*np.nonzero(mask)):
        for dx, dy, dz in ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)):
            nx, ny, nz = x + dx, y + dy, z + dz
            outside = not (0 <= nx < dims[0] and 0 <= ny < dims[1] and 0 <= nz < dims[2])
            if outside or not mask[nx, ny, nz]:
                pts.append((x, y, z))
                break
    return np.array(pts, dtype=float)


def brute_surface_metrics(a, b, label, spacing):
    """O(n^2) pairwise-distance reference for HD and ASSD."""
    pa = brute_boundary(a.labels == label) * np.array(spacing)
    pb = brute_boundary(b.labels == label) * np.array(spacing)
    d = np.sqrt(((pa[:, None, :] - pb[None, :, :]) ** 2).sum(-1))
    d_ab = d.min(axis=1)
    d_ba = d.min(axis=0)
    hd = max(d_ab.max(), d_ba.max())
    as_ = 0.5 * (d_ab.mean() + d_ba.mean())
    return hd, as_


class TestDice:
    def test_identity_is_one(self):
        a = block((6, 6, 4), (1, 1, 1), (4, 4, 3))
        assert dice(a, a, 1) == 1.0

    def test_disjoint_is_zero(self):
        a = block((8, 6, 4), (0, 0, 0), (2, 2, 2))
        b = block((8, 6, 4), (5, 3, 2), (7, 5, 4))
        assert dice(a, b, 1) == 0.0

    def test_shifted_block_half(self):
        # 2x2x1 blocks overlapping in 2 voxels: 2*2/(4+4) = 0.5
        a = block((6, 6, 3), (1, 1, 1), (3, 3, 2))
        b = block((6, 6, 3), (2, 1, 1), (4, 3, 2))
        assert dice(a, b, 1) == 0.5

    def test_both_empty_is_one(self):
        a = vol(np.zeros((4, 4, 4)))
        assert dice(a, a, 3) == 1.0

    def test_one_empty_is_zero(self):
        a = block((4, 4, 4), (1, 1, 1), (3, 3, 3))
        b = vol(np.zeros((4, 4, 4)))
        assert dice(a, b, 1) == 0.0

    def test_symmetric(self):
        a = block((6, 6, 4), (0, 0, 0), (3, 4, 2))
        b = block((6, 6, 4), (1, 2, 1), (5, 5, 4))
        assert dice(a, b, 1) == dice(b, a, 1)

    def test_erosion_strictly_decreases(self):
        a = block((8, 8, 6), (1, 1, 1), (6, 6, 5))
        shrunk = block((8, 8, 6), (2, 2, 2), (6, 6, 5))
        assert dice(a, shrunk, 1) < dice(a, a, 1)

    def test_dims_mismatch_raises(self):
        a = vol(np.zeros((4, 4, 4)))
        b = vol(np.zeros((4, 4, 5)))
        with pytest.raises(ValueError):
            dice(a, b, 1)

    def test_spacing_mismatch_raises(self):
        a = vol(np.zeros((4, 4, 4)), (1, 1, 1))
        b = vol(np.zeros((4, 4, 4)), (2, 2, 2))
        with pytest.raises(ValueError):
            dice(a, b, 1)


class TestHausdorff:
    def test_identical_is_zero(self):
        a = block((6, 6, 4), (1, 1, 1), (4, 4, 3))
        assert hausdorff(a, a, 1) == 0.0

    def test_single_voxels_along_z(self):
        # 3 voxel steps at 8 mm spacing: 24 mm
        la = np.zeros((3, 3, 8), dtype=np.uint8)
        lb = np.zeros((3, 3, 8), dtype=np.uint8)
        la[1, 1, 1] = 1
        lb[1, 1, 4] = 1
        assert hausdorff(vol(la), vol(lb), 1) == pytest.approx(24.0)

    def test_symmetric(self):
        a = block((8, 8, 5), (0, 0, 0), (3, 3, 3))
        b = block((8, 8, 5), (3, 2, 1), (7, 6, 4))
        assert hausdorff(a, b, 1) == hausdorff(b, a, 1)

    def test_empty_mask_raises(self):
        a = block((4, 4, 4), (1, 1, 1), (3, 3, 3))
        b = vol(np.zeros((4, 4, 4)))
        with pytest.raises(ValueError, match="empty"):
            hausdorff(a, b, 1)


class TestAssd:
    def test_identical_is_zero(self):
        a = block((6, 6, 4), (1, 1, 1), (4, 4, 3))
        assert assd(a, a, 1) == 0.0

    def test_symmetric(self):
        a = block((8, 8, 5), (0, 0, 0), (3, 3, 3))
        b = block((8, 8, 5), (3, 2, 1), (7, 6, 4))
        assert assd(a, b, 1) == assd(b, a, 1)

    def test_parallel_plates(self):
        # single-voxel plates 2 x-steps apart at 5 mm: every boundary point is 10 mm away
        la = np.zeros((8, 4, 4), dtype=np.uint8)
        lb = np.zeros((8, 4, 4), dtype=np.uint8)
        la[2, :, :] = 1
        lb[4, :, :] = 1
        assert assd(vol(la), vol(lb), 1) == pytest.approx(10.0)
        assert hausdorff(vol(la), vol(lb), 1) == pytest.approx(10.0)

    def test_hd_at_least_assd(self):
        a = block((8, 8, 5), (0, 0, 0), (4, 5, 3))
        b = block((8, 8, 5), (2, 2, 1), (7, 7, 5))
        assert hausdorff(a, b, 1) >= assd(a, b, 1) >= 0.0


@st.composite
def random_mask_pair(draw):
    dims = (
        draw(st.integers(3, 7)),
        draw(st.integers(3, 7)),
        draw(st.integers(3, 6)),
    )
    n = int(np.prod(dims))
    bits_a = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    bits_b = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    la = np.array(bits_a, dtype=np.uint8).reshape(dims)
    lb = np.array(bits_b, dtype=np.uint8).reshape(dims)
    return la, lb


class TestBruteForceOracle:
    @settings(max_examples=30)
    @given(pair=random_mask_pair())
    def test_matches_pairwise_reference(self, pair):
        la, lb = pair
        if la.sum() == 0 or lb.sum() == 0:
            return
        a, b = vol(la), vol(lb)
        hd_ref, assd_ref = brute_surface_metrics(a, b, 1, SPACING)
        assert hausdorff(a, b, 1) == pytest.approx(hd_ref, abs=1e-9)
        assert assd(a, b, 1) == pytest.approx(assd_ref, abs=1e-9)

    def test_matches_on_anisotropic_crosses(self):
        la = np.zeros((9, 9, 7), dtype=np.uint8)
        lb = np.zeros((9, 9, 7), dtype=np.uint8)
        la[4, 2:7, 3] = 1
        la[2:7, 4, 3] = 1
        lb[6, 3:8, 2] = 1
        lb[3:8, 5, 5] = 1
        a, b = vol(la), vol(lb)
        hd_ref, assd_ref = brute_surface_metrics(a, b, 1, SPACING)
        assert hausdorff(a, b, 1) == pytest.approx(hd_ref, abs=1e-9)
        assert assd(a, b, 1) == pytest.approx(assd_ref, abs=1e-9)

    def test_directed_distances_shapes(self):
        a = block((6, 6, 4), (1, 1, 1), (4, 4, 3))
        b = block((6, 6, 4), (2, 2, 1), (5, 5, 4))
        d_ab, d_ba = surface_distances(a, b, 1)
        assert d_ab.ndim == 1 and d_ba.ndim == 1
        assert (d_ab >= 0).all() and (d_ba >= 0).all()
