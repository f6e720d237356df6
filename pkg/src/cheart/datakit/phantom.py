"""Condition-dependent 4-D cardiac phantom generation.

A phantom heart is built from concentric ellipsoids (LV blood pool inside an
LV myocardium shell) plus a crescent-shaped RV: the free-wall half of an
outer ellipsoid wrapped around the epicardium, with the epicardial region
carved out. Chamber geometry contracts and relaxes over one cycle following
a smooth raised-cosine curve, and is deterministically modulated by the
subject's clinical factors plus seeded per-subject jitter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import GeometryError
from .conditions import ConditionSamplerSpec, age_group_index, encode_conditions
from .types import (
    LV,
    MYO,
    N_AGE_GROUPS,
    RV,
    AnatomySequence,
    ConditionProfile,
    Dataset,
    NormalizationBounds,
    SegVolume,
    SubjectRecord,
)


@dataclass(frozen=True)
class ConditionSensitivity:
    """Fractional geometry change per condition factor.

    Each coefficient is the full-range effect of its factor (factors are
    normalized to [0, 1] and centered, so e.g. height_size=0.20 makes the
    tallest subject's chambers 10% wider in radius than the cohort center).
    Signs encode the built-in population trends: bigger bodies and male sex
    mean larger ventricles; older age means smaller chambers, thicker walls
    and weaker contraction; higher SBP means thicker walls.
    """

    height_size: float = 0.20
    weight_size: float = 0.10
    male_size: float = 0.10
    age_size: float = -0.12
    age_wall: float = 0.35
    sbp_wall: float = 0.20
    male_wall: float = 0.10
    age_contraction: float = -0.25

    def size_scale(self, h01, w01, male, a01):
        return (
            1.0
            + self.height_size * (h01 - 0.5)
            + self.weight_size * (w01 - 0.5)
            + self.male_size * (male - 0.5)
            + self.age_size * (a01 - 0.5)
        )

    def wall_scale(self, a01, sbp01, male):
        return (
            1.0
            + self.age_wall * (a01 - 0.5)
            + self.sbp_wall * (sbp01 - 0.5)
            + self.male_wall * (male - 0.5)
        )

    def contraction_scale(self, a01):
        return 1.0 + self.age_contraction * (a01 - 0.5)


@dataclass
class PhantomParams:
    """Geometry, dynamics and condition-sensitivity of the phantom family.

    Lengths are physical mm; the LV center sits off grid center on +x to
    leave room for the RV crescent on the free-wall (-x) side. The RV outer
    surface is the epicardium scaled per axis by `rv_outer_scale`, cut at
    the half-space x <= lv_center_x + rv_cut * outer_x, minus the epicardial
    region dilated by `rv_clearance_mm` (the septal wall).
    """

    dims: tuple[int, int, int] = (32, 32, 16)
    t_frames: int = 8
    spacing_mm: tuple[float, float, float] = (5.0, 5.0, 8.0)
    frame_period_s: float = 0.045
    lv_center_shift_mm: float = 15.0
    lv_radii_mm: tuple[float, float, float] = (33.0, 33.0, 30.0)
    wall_mm: float = 8.0
    rv_outer_scale: tuple[float, float, float] = (1.55, 1.25, 0.95)
    rv_cut: float = 0.5
    rv_clearance_mm: float = 1.0
    lv_contraction: float = 0.24  # peak fractional radius shortening
    rv_contraction: float = 0.14
    wall_thickening: float = 0.35  # peak fractional systolic wall thickening
    systolic_phase: float = 0.375
    sensitivity: ConditionSensitivity = field(default_factory=ConditionSensitivity)
    noise_std: float = 0.04
    bounds: NormalizationBounds = field(default_factory=NormalizationBounds)

    def __post_init__(self):
        if any(d < 8 for d in self.dims):
            raise ValueError(f"grid dims too small: {self.dims}")
        if self.t_frames < 2:
            raise ValueError("t_frames must be >= 2")
        if any(r <= 0 for r in self.lv_radii_mm) or self.wall_mm <= 0:
            raise ValueError("geometric radii must be positive")
        if any(s <= 1.0 for s in self.rv_outer_scale[:1]) or any(s <= 0 for s in self.rv_outer_scale):
            raise ValueError("rv_outer_scale must be positive with lateral component > 1")
        if not 0.0 < self.systolic_phase < 1.0:
            raise ValueError("systolic_phase must lie in (0, 1)")
        if not 0.0 < self.lv_contraction < 1.0 or not 0.0 < self.rv_contraction < 1.0:
            raise ValueError("contraction amplitudes must lie in (0, 1)")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")

    @property
    def es_frame(self) -> int:
        return int(round(self.systolic_phase * self.t_frames))


def contraction_curve(t_frames: int, systolic_phase: float) -> np.ndarray:
    """Raised-cosine contraction weight per frame: 0 at ED, 1 at the ES frame.

    The peak sits exactly on the sampled frame round(phase * T), so the frame
    of minimal chamber volume is deterministic; relaxation completes half a
    frame before the cycle wraps, keeping the last frame close to ED.
    """
    t_es = int(round(systolic_phase * t_frames))
    t_es = min(max(t_es, 1), t_frames - 1)
    u = np.arange(t_frames) / t_frames
    u_peak = t_es / t_frames
    u_end = 1.0 - 0.5 / t_frames
    g = np.where(
        u <= u_peak,
        0.5 * (1.0 - np.cos(np.pi * u / u_peak)),
        0.5 * (1.0 + np.cos(np.pi * np.minimum((u - u_peak) / (u_end - u_peak), 1.0))),
    )
    return g


def _ellipsoid_mask(coords, center, semi_axes):
    x, y, z = coords
    cx, cy, cz = center
    a, b, c = semi_axes
    return ((x - cx) / a) ** 2 + ((y - cy) / b) ** 2 + ((z - cz) / c) ** 2 <= 1.0


def _subject_factors(profile: ConditionProfile, params: PhantomParams, rng: np.random.Generator):
    """Per-subject geometry scales: condition effects plus Gaussian jitter."""
    cvec = encode_conditions(profile, params.bounds).values
    a01 = age_group_index(profile.age_years) / (N_AGE_GROUPS - 1)
    male = cvec[N_AGE_GROUPS]
    w01, h01, sbp01 = cvec[N_AGE_GROUPS + 1 :]
    s = params.sensitivity
    noise = params.noise_std
    # draw order is fixed; it is part of the determinism contract
    size_jit = rng.normal(0.0, noise)
    wall_jit = rng.normal(0.0, noise)
    contr_jit = rng.normal(0.0, 0.5 * noise)
    # the RV rides on the epicardium, so the shared size jitter already
    # reaches it; its own draws stay small enough that conditions, not
    # noise, dominate RV volume spread across a cohort
    rv_jit = rng.normal(0.0, 0.4 * noise)
    lv_axis_jit = rng.normal(0.0, 0.5 * noise, size=3)
    rv_axis_jit = rng.normal(0.0, 0.25 * noise, size=3)
    return {
        "lv_size": s.size_scale(h01, w01, male, a01) * (1.0 + size_jit),
        "wall": s.wall_scale(a01, sbp01, male) * (1.0 + wall_jit),
        "contraction": s.contraction_scale(a01) * (1.0 + contr_jit),
        "rv_size": 1.0 + rv_jit,
        "lv_axes": 1.0 + lv_axis_jit,
        "rv_axes": 1.0 + rv_axis_jit,
    }


def make_phantom(params: PhantomParams, profile: ConditionProfile, seed: int) -> AnatomySequence:
    """Generate one subject's T-frame cardiac cycle.

    Deterministic in (params, profile, seed). Raises GeometryError if the
    realized anatomy would touch the one-voxel background margin of the grid.
    """
    rng = np.random.default_rng(seed)
    factors = _subject_factors(profile, params, rng)

    nx, ny, nz = params.dims
    dx, dy, dz = params.spacing_mm
    coords = (
        (np.arange(nx) * dx)[:, None, None],
        (np.arange(ny) * dy)[None, :, None],
        (np.arange(nz) * dz)[None, None, :],
    )
    lv_center = (
        (nx - 1) / 2 * dx + params.lv_center_shift_mm,
        (ny - 1) / 2 * dy,
        (nz - 1) / 2 * dz,
    )

    lv_ed = np.array(params.lv_radii_mm) * factors["lv_size"] * factors["lv_axes"]
    wall_ed = params.wall_mm * factors["wall"]
    rv_outer = np.array(params.rv_outer_scale) * factors["rv_size"] * factors["rv_axes"]
    lv_amp = params.lv_contraction * factors["contraction"]
    rv_amp = params.rv_contraction * factors["contraction"]
    if not 0.0 < lv_amp < 1.0 or not 0.0 < rv_amp < 1.0:
        raise GeometryError(f"contraction amplitude out of range: lv={lv_amp:.3f} rv={rv_amp:.3f}")

    epi_ed = lv_ed + wall_ed
    g = contraction_curve(params.t_frames, params.systolic_phase)
    frames = []
    for t in range(params.t_frames):
        endo = lv_ed * (1.0 - lv_amp * g[t])
        wall = wall_ed * (1.0 + params.wall_thickening * g[t])
        epi = endo + wall
        outer = epi_ed * rv_outer * (1.0 - rv_amp * g[t])
        labels = np.zeros(params.dims, dtype=np.uint8)
        labels[_ellipsoid_mask(coords, lv_center, epi)] = MYO
        labels[_ellipsoid_mask(coords, lv_center, endo)] = LV
        rv_mask = _ellipsoid_mask(coords, lv_center, outer)
        rv_mask &= coords[0][:, 0, 0, None, None] <= lv_center[0] + params.rv_cut * outer[0]
        rv_mask &= ~_ellipsoid_mask(coords, lv_center, epi + params.rv_clearance_mm)
        labels[rv_mask] = RV
        _check_margin(labels, t)
        frames.append(SegVolume(labels, params.spacing_mm))
    return AnatomySequence(frames, params.frame_period_s)


def _check_margin(labels: np.ndarray, t: int):
    border = (
        labels[0].any() or labels[-1].any()
        or labels[:, 0].any() or labels[:, -1].any()
        or labels[:, :, 0].any() or labels[:, :, -1].any()
    )
    if border:
        raise GeometryError(f"anatomy touches the grid border at frame {t}; shrink radii or enlarge the grid")


def _split_counts(n: int, fractions: tuple[float, float, float]) -> list[int]:
    raw = [n * f for f in fractions]
    counts = [int(math.floor(r + 1e-9)) for r in raw]
    remainder_order = sorted(range(3), key=lambda i: raw[i] - counts[i], reverse=True)
    i = 0
    while sum(counts) < n:
        counts[remainder_order[i % 3]] += 1
        i += 1
    for j in range(3):
        if fractions[j] > 0 and counts[j] == 0:
            donor = max(range(3), key=lambda k: counts[k])
            counts[donor] -= 1
            counts[j] += 1
    return counts


def make_dataset(
    params: PhantomParams,
    n_subjects: int,
    sampler_spec: ConditionSamplerSpec | None = None,
    seed: int = 0,
    split_fractions: tuple[float, float, float] = (0.7, 0.1, 0.2),
) -> Dataset:
    """Sample a cohort of condition profiles and build one phantom each.

    Subjects are assigned whole to train/val/test splits; per-subject seeds
    are derived from `seed` so generation may be parallelized per subject
    without changing the result.
    """
    if n_subjects < 3:
        raise ValueError("need at least 3 subjects to populate all splits")
    if abs(sum(split_fractions) - 1.0) > 1e-9:
        raise ValueError(f"split fractions must sum to 1, got {split_fractions}")
    sampler_spec = sampler_spec or ConditionSamplerSpec()

    state = np.random.SeedSequence(seed).generate_state(2 * n_subjects + 1, np.uint64)
    profiles = [sampler_spec.sample(np.random.default_rng(int(state[2 * i]))) for i in range(n_subjects)]

    counts = _split_counts(n_subjects, split_fractions)
    order = np.random.default_rng(int(state[-1])).permutation(n_subjects)
    split_of = {}
    cursor = 0
    for split_name, count in zip(("train", "val", "test"), counts):
        for idx in order[cursor : cursor + count]:
            split_of[int(idx)] = split_name
        cursor += count

    records = []
    for i, profile in enumerate(profiles):
        seq = make_phantom(params, profile, seed=int(state[2 * i + 1]))
        records.append(SubjectRecord(f"s{i:04d}", seq, profile, split_of[i]))
    return Dataset(records)
