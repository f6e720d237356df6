"""Condition encoding and population sampling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .types import (
    AGE_MIN,
    CONDITION_VECTOR_DIM,
    GENDERS,
    N_AGE_GROUPS,
    ConditionProfile,
    ConditionVector,
    NormalizationBounds,
)


def age_group_index(age_years: int) -> int:
    """10-year age bin index, clamped to the 7 supported groups."""
    idx = (int(age_years) - AGE_MIN) // 10
    return min(max(idx, 0), N_AGE_GROUPS - 1)


def _scale01(value: float, lo: float, hi: float) -> float:
    return min(max((value - lo) / (hi - lo), 0.0), 1.0)


def encode_conditions(profile: ConditionProfile, bounds: NormalizationBounds | None = None) -> ConditionVector:
    """Encode raw clinical factors into the fixed 11-entry numeric vector.

    Age becomes a one-hot group, gender a {0, 1} flag (female=0, male=1) and
    the continuous factors are min-max scaled against `bounds` then clamped
    to [0, 1], so out-of-range profiles still produce valid vectors.
    """
    bounds = bounds or NormalizationBounds()
    for name in ("weight_kg", "height_cm", "sbp_mmhg"):
        if not math.isfinite(getattr(profile, name)):
            raise ValueError(f"non-finite condition {name}")
    values = np.zeros(CONDITION_VECTOR_DIM, dtype=np.float64)
    values[age_group_index(profile.age_years)] = 1.0
    values[N_AGE_GROUPS] = float(GENDERS.index(profile.gender))
    values[N_AGE_GROUPS + 1] = _scale01(profile.weight_kg, *bounds.weight_kg)
    values[N_AGE_GROUPS + 2] = _scale01(profile.height_cm, *bounds.height_cm)
    values[N_AGE_GROUPS + 3] = _scale01(profile.sbp_mmhg, *bounds.sbp_mmhg)
    return ConditionVector(values)


@dataclass(frozen=True)
class ConditionSamplerSpec:
    """Ranges and body-habitus statistics for sampling synthetic cohorts.

    Clip ranges default to the reference population; heights and weights are
    drawn gender-dependent so the cohort carries realistic factor
    correlations rather than an independent product distribution.
    """

    age_range: tuple[int, int] = (18, 73)
    male_fraction: float = 0.44
    height_mean_cm: tuple[float, float] = (164.0, 178.0)  # (female, male)
    height_sd_cm: float = 7.0
    height_clip_cm: tuple[float, float] = (142.0, 195.0)
    bmi_mean: float = 26.0
    bmi_sd: float = 4.0
    weight_clip_kg: tuple[float, float] = (33.0, 131.0)
    sbp_base_mmhg: float = 112.0
    sbp_age_slope: float = 0.35  # mmHg per year
    sbp_sd_mmhg: float = 12.0
    sbp_clip_mmhg: tuple[float, float] = (79.0, 183.0)

    def sample(self, rng: np.random.Generator) -> ConditionProfile:
        age = int(rng.integers(self.age_range[0], self.age_range[1] + 1))
        male = rng.random() < self.male_fraction
        height = float(
            np.clip(
                rng.normal(self.height_mean_cm[1] if male else self.height_mean_cm[0], self.height_sd_cm),
                *self.height_clip_cm,
            )
        )
        bmi = rng.normal(self.bmi_mean, self.bmi_sd)
        weight = float(np.clip(bmi * (height / 100.0) ** 2, *self.weight_clip_kg))
        sbp = float(
            np.clip(
                rng.normal(self.sbp_base_mmhg + self.sbp_age_slope * age, self.sbp_sd_mmhg),
                *self.sbp_clip_mmhg,
            )
        )
        return ConditionProfile(
            age_years=age,
            gender="male" if male else "female",
            weight_kg=round(weight, 1),
            height_cm=round(height, 1),
            sbp_mmhg=round(sbp, 1),
        )
