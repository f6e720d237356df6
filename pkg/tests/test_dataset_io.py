import hashlib
import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from cheart.datakit.io import (
    decode_labels,
    load_dataset,
    load_sequence,
    one_hot,
    save_dataset,
    save_sequence,
)
from cheart.datakit.phantom import PhantomParams, make_dataset, make_phantom
from cheart.datakit.types import ConditionProfile, SegVolume
from cheart.errors import DatasetFormatError


def profile():
    return ConditionProfile(
        age_years=45, gender="male", weight_kg=82.0, height_cm=168.5, sbp_mmhg=131.0
    )


def small_sequence(seed=0):
    params = PhantomParams(dims=(16, 16, 8), lv_radii_mm=(15.0, 15.0, 14.0),
                           wall_mm=5.0, lv_center_shift_mm=7.0,
                           rv_outer_scale=(1.4, 1.1, 0.9), noise_std=0.0)
    return make_phantom(params, profile(), seed=seed)


class TestOneHot:
    def test_shape_and_channel_order(self):
        labels = np.zeros((2, 3, 4), dtype=np.uint8)
        labels[0, 0, 0] = 3
        p = one_hot(labels)
        assert p.shape == (4, 2, 3, 4)
        assert p.dtype == np.float32
        assert p[3, 0, 0, 0] == 1.0
        assert p[0, 0, 0, 0] == 0.0
        assert np.all(p.sum(axis=0) == 1.0)

    def test_rejects_out_of_range_labels(self):
        with pytest.raises(ValueError):
            one_hot(np.full((2, 2, 2), 7, dtype=np.uint8))

    @given(
        labels=hnp.arrays(
            dtype=np.uint8,
            shape=st.tuples(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5)),
            elements=st.integers(0, 3),
        )
    )
    def test_decode_inverts_one_hot(self, labels):
        vol = decode_labels(one_hot(labels), (5.0, 5.0, 8.0))
        assert np.array_equal(vol.labels, labels)


class TestDecodeLabels:
    def test_uniform_probabilities_pick_background(self):
        prob = np.full((4, 1, 1, 1), 0.25, dtype=np.float32)
        assert decode_labels(prob, (1, 1, 1)).labels[0, 0, 0] == 0

    def test_argmax_picks_largest(self):
        prob = np.array([0.1, 0.2, 0.3, 0.4], dtype=np.float32).reshape(4, 1, 1, 1)
        assert decode_labels(prob, (1, 1, 1)).labels[0, 0, 0] == 3

    def test_rejects_wrong_rank(self):
        with pytest.raises(ValueError):
            decode_labels(np.zeros((4, 2, 2)), (1, 1, 1))


class TestSequenceRoundTrip:
    def test_round_trip_preserves_everything(self, tmp_path):
        seq = small_sequence()
        save_sequence(seq, profile(), tmp_path / "s0000")
        loaded, prof = load_sequence(tmp_path / "s0000")
        assert loaded == seq
        assert prof == profile()

    def test_round_trip_without_conditions(self, tmp_path):
        seq = small_sequence()
        save_sequence(seq, None, tmp_path / "anon")
        loaded, prof = load_sequence(tmp_path / "anon")
        assert loaded == seq
        assert prof is None

    def test_missing_meta(self, tmp_path):
        (tmp_path / "x").mkdir()
        with pytest.raises(DatasetFormatError, match="meta.json"):
            load_sequence(tmp_path / "x")

    def test_unparseable_meta(self, tmp_path):
        d = tmp_path / "x"
        d.mkdir()
        (d / "meta.json").write_text("{not json")
        with pytest.raises(DatasetFormatError, match="unparseable"):
            load_sequence(d)

    def test_wrong_format_version(self, tmp_path):
        d = save_sequence(small_sequence(), profile(), tmp_path / "x")
        meta = json.loads((d / "meta.json").read_text())
        meta["format_version"] = 99
        (d / "meta.json").write_text(json.dumps(meta))
        with pytest.raises(DatasetFormatError, match="format_version"):
            load_sequence(d)

    def test_dims_payload_mismatch(self, tmp_path):
        d = save_sequence(small_sequence(), profile(), tmp_path / "x")
        meta = json.loads((d / "meta.json").read_text())
        meta["dims"] = [64, 64, 32]  # header promises more voxels than stored
        (d / "meta.json").write_text(json.dumps(meta))
        with pytest.raises(DatasetFormatError, match="payload"):
            load_sequence(d)

    def test_missing_frame_file(self, tmp_path):
        d = save_sequence(small_sequence(), profile(), tmp_path / "x")
        (d / "frame_002.u8raw").unlink()
        with pytest.raises(DatasetFormatError, match="frame_002"):
            load_sequence(d)

    def test_invalid_label_values(self, tmp_path):
        d = save_sequence(small_sequence(), profile(), tmp_path / "x")
        payload = bytearray((d / "frame_000.u8raw").read_bytes())
        payload[0] = 200
        (d / "frame_000.u8raw").write_bytes(bytes(payload))
        with pytest.raises(DatasetFormatError, match="labels"):
            load_sequence(d)


def _tree_digest(root: Path) -> str:
    h = hashlib.sha256()
    for p in sorted(root.rglob("*")):
        if p.is_file():
            h.update(str(p.relative_to(root)).encode())
            h.update(p.read_bytes())
    return h.hexdigest()


class TestDatasetRoundTrip:
    def _tiny_dataset(self):
        params = PhantomParams(dims=(16, 16, 8), lv_radii_mm=(15.0, 15.0, 14.0),
                               wall_mm=5.0, lv_center_shift_mm=7.0,
                               rv_outer_scale=(1.4, 1.1, 0.9))
        return make_dataset(params, 6, seed=7)

    def test_round_trip(self, tmp_path):
        ds = self._tiny_dataset()
        save_dataset(ds, tmp_path / "data")
        loaded = load_dataset(tmp_path / "data")
        assert len(loaded) == len(ds)
        by_id = {r.subject_id: r for r in ds.records}
        for rec in loaded.records:
            orig = by_id[rec.subject_id]
            assert rec.split == orig.split
            assert rec.profile == orig.profile
            assert rec.sequence == orig.sequence

    def test_writes_are_reproducible(self, tmp_path):
        save_dataset(self._tiny_dataset(), tmp_path / "a")
        save_dataset(self._tiny_dataset(), tmp_path / "b")
        assert _tree_digest(tmp_path / "a") == _tree_digest(tmp_path / "b")

    def test_missing_root(self, tmp_path):
        with pytest.raises(DatasetFormatError):
            load_dataset(tmp_path / "nope")

    def test_empty_root(self, tmp_path):
        (tmp_path / "empty").mkdir()
        with pytest.raises(DatasetFormatError, match="no subjects"):
            load_dataset(tmp_path / "empty")

    def test_dataset_subjects_require_conditions(self, tmp_path):
        root = tmp_path / "data"
        save_sequence(small_sequence(), None, root / "train" / "s0000")
        with pytest.raises(DatasetFormatError, match="conditions"):
            load_dataset(root)


class TestSegVolumeValidation:
    def test_rejects_bad_labels(self):
        with pytest.raises(ValueError):
            SegVolume(np.full((2, 2, 2), 9, dtype=np.uint8), (1, 1, 1))

    def test_rejects_non_3d(self):
        with pytest.raises(ValueError):
            SegVolume(np.zeros((2, 2), dtype=np.uint8), (1, 1, 1))

    def test_rejects_bad_spacing(self):
        with pytest.raises(ValueError):
            SegVolume(np.zeros((2, 2, 2), dtype=np.uint8), (0.0, 1.0, 1.0))

    def test_voxel_volume(self):
        v = SegVolume(np.zeros((2, 2, 2), dtype=np.uint8), (5.0, 5.0, 8.0))
        assert v.voxel_volume_ml == pytest.approx(0.2)
