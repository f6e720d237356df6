"""Core anatomy and condition data types.

Label convention for segmentation volumes: 0 background, 1 LV blood pool,
2 LV myocardium, 3 RV blood pool. Spacing is physical voxel size in mm,
one value per grid axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

BACKGROUND, LV, MYO, RV = 0, 1, 2, 3
N_CLASSES = 4
LABEL_NAMES = {BACKGROUND: "background", LV: "lv", MYO: "myo", RV: "rv"}

GENDERS = ("female", "male")

N_AGE_GROUPS = 7
AGE_MIN, AGE_MAX = 10, 80  # age groups span [10, 80) in 10-year bins

CONDITION_VECTOR_DIM = N_AGE_GROUPS + 1 + 3

SPLITS = ("train", "val", "test")


def _check_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass
class SegVolume:
    """A 3-D label volume over an (X, Y, Z) grid with physical spacing in mm."""

    labels: np.ndarray
    spacing: tuple[float, float, float]

    def __post_init__(self):
        self.labels = np.ascontiguousarray(self.labels)
        if self.labels.ndim != 3:
            raise ValueError(f"labels must be 3-D, got shape {self.labels.shape}")
        if self.labels.dtype != np.uint8:
            if self.labels.min(initial=0) < 0 or self.labels.max(initial=0) > 255:
                raise ValueError("labels out of uint8 range")
            self.labels = self.labels.astype(np.uint8)
        bad = np.unique(self.labels[self.labels >= N_CLASSES])
        if bad.size:
            raise ValueError(f"labels contain invalid class ids {bad.tolist()}")
        self.spacing = tuple(float(s) for s in self.spacing)
        if len(self.spacing) != 3:
            raise ValueError("spacing needs three components")
        for s in self.spacing:
            if not (math.isfinite(s) and s > 0):
                raise ValueError(f"spacing components must be positive and finite, got {self.spacing}")

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.labels.shape

    @property
    def voxel_volume_ml(self) -> float:
        return float(np.prod(self.spacing)) / 1000.0

    def count(self, label: int) -> int:
        return int(np.count_nonzero(self.labels == label))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SegVolume):
            return NotImplemented
        return self.spacing == other.spacing and np.array_equal(self.labels, other.labels)


@dataclass
class AnatomySequence:
    """One cardiac cycle: T label volumes sharing grid and spacing.

    Frame 0 is the end-diastolic frame by convention.
    """

    frames: list[SegVolume]
    frame_period_s: float

    def __post_init__(self):
        if len(self.frames) < 2:
            raise ValueError(f"a sequence needs at least 2 frames, got {len(self.frames)}")
        first = self.frames[0]
        for i, f in enumerate(self.frames[1:], start=1):
            if f.dims != first.dims:
                raise ValueError(f"frame {i} dims {f.dims} != frame 0 dims {first.dims}")
            if f.spacing != first.spacing:
                raise ValueError(f"frame {i} spacing {f.spacing} != frame 0 spacing {first.spacing}")
        self.frame_period_s = float(self.frame_period_s)
        if not (math.isfinite(self.frame_period_s) and self.frame_period_s > 0):
            raise ValueError("frame_period_s must be positive and finite")

    @property
    def t_frames(self) -> int:
        return len(self.frames)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.frames[0].dims

    @property
    def spacing(self) -> tuple[float, float, float]:
        return self.frames[0].spacing

    @property
    def voxel_volume_ml(self) -> float:
        return self.frames[0].voxel_volume_ml

    def label_stack(self) -> np.ndarray:
        """All frames as one (T, X, Y, Z) uint8 array."""
        return np.stack([f.labels for f in self.frames])

    def counts(self, label: int) -> np.ndarray:
        """Voxel count of `label` per frame, shape (T,)."""
        return np.array([f.count(label) for f in self.frames])

    def __eq__(self, other) -> bool:
        if not isinstance(other, AnatomySequence):
            return NotImplemented
        return (
            self.frame_period_s == other.frame_period_s
            and len(self.frames) == len(other.frames)
            and all(a == b for a, b in zip(self.frames, other.frames))
        )


@dataclass(frozen=True)
class ConditionProfile:
    """Raw clinical factors of one subject."""

    age_years: int
    gender: str
    weight_kg: float
    height_cm: float
    sbp_mmhg: float

    def __post_init__(self):
        object.__setattr__(self, "age_years", int(self.age_years))
        if not AGE_MIN <= self.age_years < AGE_MAX:
            raise ValueError(f"age_years must lie in [{AGE_MIN}, {AGE_MAX}), got {self.age_years}")
        if self.gender not in GENDERS:
            raise ValueError(f"gender must be one of {GENDERS}, got {self.gender!r}")
        for name in ("weight_kg", "height_cm", "sbp_mmhg"):
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            _check_finite(name, value)
            if value <= 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")

    def replace(self, **changes) -> "ConditionProfile":
        fields = dict(
            age_years=self.age_years,
            gender=self.gender,
            weight_kg=self.weight_kg,
            height_cm=self.height_cm,
            sbp_mmhg=self.sbp_mmhg,
        )
        fields.update(changes)
        return ConditionProfile(**fields)

    def as_dict(self) -> dict:
        return {
            "age_years": self.age_years,
            "gender": self.gender,
            "weight_kg": self.weight_kg,
            "height_cm": self.height_cm,
            "sbp_mmhg": self.sbp_mmhg,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConditionProfile":
        return cls(
            age_years=d["age_years"],
            gender=d["gender"],
            weight_kg=d["weight_kg"],
            height_cm=d["height_cm"],
            sbp_mmhg=d["sbp_mmhg"],
        )


@dataclass
class ConditionVector:
    """Encoded conditions: 7 one-hot age groups, binary gender, 3 scaled factors."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (CONDITION_VECTOR_DIM,):
            raise ValueError(f"condition vector must have shape ({CONDITION_VECTOR_DIM},), got {self.values.shape}")
        head = self.values[:N_AGE_GROUPS]
        if not (np.count_nonzero(head == 1.0) == 1 and np.count_nonzero(head) == 1):
            raise ValueError("age one-hot block must have exactly one entry set to 1")
        if self.values[N_AGE_GROUPS] not in (0.0, 1.0):
            raise ValueError("gender entry must be 0 or 1")
        tail = self.values[N_AGE_GROUPS + 1 :]
        if np.any(tail < 0.0) or np.any(tail > 1.0):
            raise ValueError("scaled continuous entries must lie in [0, 1]")

    @property
    def age_group(self) -> int:
        return int(np.argmax(self.values[:N_AGE_GROUPS]))


@dataclass(frozen=True)
class NormalizationBounds:
    """Per-factor (min, max) used to min-max scale the continuous conditions.

    Defaults are the population ranges of the study cohort the model family
    was designed around.
    """

    weight_kg: tuple[float, float] = (33.0, 131.0)
    height_cm: tuple[float, float] = (142.0, 195.0)
    sbp_mmhg: tuple[float, float] = (79.0, 183.0)

    def __post_init__(self):
        for name in ("weight_kg", "height_cm", "sbp_mmhg"):
            lo, hi = getattr(self, name)
            _check_finite(name, lo)
            _check_finite(name, hi)
            if not lo < hi:
                raise ValueError(f"{name} bounds need min < max, got ({lo}, {hi})")
            object.__setattr__(self, name, (float(lo), float(hi)))

    def as_dict(self) -> dict:
        return {
            "weight_kg": list(self.weight_kg),
            "height_cm": list(self.height_cm),
            "sbp_mmhg": list(self.sbp_mmhg),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizationBounds":
        return cls(
            weight_kg=tuple(d["weight_kg"]),
            height_cm=tuple(d["height_cm"]),
            sbp_mmhg=tuple(d["sbp_mmhg"]),
        )


@dataclass
class SubjectRecord:
    subject_id: str
    sequence: AnatomySequence
    profile: ConditionProfile
    split: str

    def __post_init__(self):
        if self.split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}, got {self.split!r}")


@dataclass
class Dataset:
    """A collection of subjects, each tagged with its train/val/test split."""

    records: list[SubjectRecord] = field(default_factory=list)

    def __post_init__(self):
        ids = [r.subject_id for r in self.records]
        if len(ids) != len(set(ids)):
            raise ValueError("subject_ids must be unique")

    def split(self, name: str) -> list[SubjectRecord]:
        if name not in SPLITS:
            raise ValueError(f"unknown split {name!r}")
        return [r for r in self.records if r.split == name]

    def __len__(self) -> int:
        return len(self.records)
