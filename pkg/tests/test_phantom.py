import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cheart.datakit.phantom import (
    PhantomParams,
    _split_counts,
    contraction_curve,
    make_dataset,
    make_phantom,
)
from cheart.datakit.types import LV, MYO, RV, ConditionProfile
from cheart.errors import GeometryError


def profile(**kw):
    base = dict(age_years=45, gender="male", weight_kg=82.0, height_cm=168.5, sbp_mmhg=131.0)
    base.update(kw)
    return ConditionProfile(**base)


class TestContractionCurve:
    def test_anchors(self):
        g = contraction_curve(8, 0.375)
        assert g[0] == 0.0
        assert g[3] == 1.0
        assert g.max() == 1.0

    @given(t_frames=st.integers(2, 24), phase=st.floats(0.05, 0.95))
    def test_shape_properties(self, t_frames, phase):
        g = contraction_curve(t_frames, phase)
        t_es = min(max(int(round(phase * t_frames)), 1), t_frames - 1)
        assert g.shape == (t_frames,)
        assert g[0] == 0.0
        assert g[t_es] == pytest.approx(1.0)
        assert np.all(np.diff(g[: t_es + 1]) >= 0)
        assert np.all(np.diff(g[t_es:]) <= 0)
        assert np.all((g >= 0) & (g <= 1))

    def test_relaxation_returns_near_baseline(self):
        g = contraction_curve(8, 0.375)
        assert g[-1] < 0.05


class TestMakePhantom:
    def test_deterministic(self):
        p = PhantomParams()
        a = make_phantom(p, profile(), seed=3)
        b = make_phantom(p, profile(), seed=3)
        assert a == b

    def test_seed_changes_output(self):
        p = PhantomParams()
        a = make_phantom(p, profile(), seed=3)
        b = make_phantom(p, profile(), seed=4)
        assert a != b

    def test_frame_count_and_dims(self):
        p = PhantomParams()
        seq = make_phantom(p, profile(), seed=0)
        assert seq.t_frames == p.t_frames
        assert seq.dims == p.dims
        assert seq.spacing == p.spacing_mm

    def test_all_structures_present_every_frame(self):
        seq = make_phantom(PhantomParams(), profile(), seed=1)
        for frame in seq.frames:
            for label in (LV, MYO, RV):
                assert frame.count(label) > 0

    def test_height_monotonicity_without_noise(self):
        p = PhantomParams(noise_std=0.0)
        short = make_phantom(p, profile(height_cm=150.0), seed=1)
        tall = make_phantom(p, profile(height_cm=190.0), seed=1)
        v = lambda s: s.frames[0].count(LV) * s.frames[0].voxel_volume_ml
        assert v(tall) > v(short)

    def test_age_thickens_wall_without_noise(self):
        p = PhantomParams(noise_std=0.0)
        young = make_phantom(p, profile(age_years=20), seed=1)
        old = make_phantom(p, profile(age_years=72), seed=1)
        assert old.frames[0].count(MYO) > young.frames[0].count(MYO)

    def test_es_frame_attains_min_volume(self):
        p = PhantomParams()
        for seed in range(6):
            seq = make_phantom(p, profile(), seed=seed)
            counts = seq.counts(LV)
            assert counts[p.es_frame] == counts.min()
            rv_counts = seq.counts(RV)
            assert rv_counts[p.es_frame] == rv_counts.min()

    def test_cycle_returns_near_end_diastole(self):
        seq = make_phantom(PhantomParams(), profile(), seed=2)
        counts = seq.counts(LV)
        assert abs(counts[-1] - counts[0]) / counts[0] <= 0.1

    def test_contraction_is_substantial(self):
        seq = make_phantom(PhantomParams(), profile(), seed=2)
        counts = seq.counts(LV)
        ef = 1.0 - counts.min() / counts[0]
        assert 0.3 <= ef <= 0.8

    def test_oversized_anatomy_raises_geometry_error(self):
        p = PhantomParams(lv_radii_mm=(70.0, 70.0, 55.0))
        with pytest.raises(GeometryError):
            make_phantom(p, profile(), seed=0)

    def test_background_margin_everywhere(self):
        seq = make_phantom(PhantomParams(), profile(), seed=5)
        for frame in seq.frames:
            v = frame.labels
            assert not v[0].any() and not v[-1].any()
            assert not v[:, 0].any() and not v[:, -1].any()
            assert not v[:, :, 0].any() and not v[:, :, -1].any()


class TestSplitCounts:
    def test_example_7_1_2(self):
        assert _split_counts(10, (0.7, 0.1, 0.2)) == [7, 1, 2]

    def test_small_n(self):
        assert sum(_split_counts(3, (0.7, 0.1, 0.2))) == 3
        assert min(_split_counts(3, (0.7, 0.1, 0.2))) >= 1

    @given(n=st.integers(3, 500))
    def test_counts_sum_and_cover(self, n):
        counts = _split_counts(n, (0.7, 0.1, 0.2))
        assert sum(counts) == n
        assert all(c >= 1 for c in counts)


class TestMakeDataset:
    def test_deterministic(self):
        p = PhantomParams()
        a = make_dataset(p, 5, seed=11)
        b = make_dataset(p, 5, seed=11)
        assert len(a) == len(b) == 5
        for ra, rb in zip(a.records, b.records):
            assert ra.subject_id == rb.subject_id
            assert ra.split == rb.split
            assert ra.profile == rb.profile
            assert ra.sequence == rb.sequence

    def test_split_assignment_complete(self):
        ds = make_dataset(PhantomParams(), 10, seed=0)
        assert len(ds.split("train")) == 7
        assert len(ds.split("val")) == 1
        assert len(ds.split("test")) == 2

    def test_unique_subject_ids(self):
        ds = make_dataset(PhantomParams(), 8, seed=0)
        ids = [r.subject_id for r in ds.records]
        assert len(set(ids)) == len(ids)

    def test_rejects_tiny_cohort(self):
        with pytest.raises(ValueError):
            make_dataset(PhantomParams(), 2, seed=0)

    def test_rejects_bad_fractions(self):
        with pytest.raises(ValueError):
            make_dataset(PhantomParams(), 5, seed=0, split_fractions=(0.5, 0.2, 0.2))

    @pytest.mark.slow
    def test_default_corpus_volumes_physiological(self):
        ds = make_dataset(PhantomParams(), 200, seed=0)
        assert len(ds) == 200
        for rec in ds.records:
            f0 = rec.sequence.frames[0]
            lvedv = f0.count(LV) * f0.voxel_volume_ml
            assert 40.0 <= lvedv <= 350.0
