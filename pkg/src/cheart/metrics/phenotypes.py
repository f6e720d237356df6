"""Clinical imaging phenotypes extracted from a label sequence.

Five measures: LV myocardial mass, LV and RV end-diastolic and end-systolic
volumes. End-diastole is frame 0 by convention; end-systole is the frame of
minimal blood-pool volume, located per chamber so end-systolic never exceeds
end-diastolic volume. Mass assumes myocardial density 1.05 g/mL.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..datakit.types import LV, MYO, RV, AnatomySequence

MYO_DENSITY_G_PER_ML = 1.05

PHENOTYPE_FIELDS = ("lvm_g", "lvedv_ml", "lvesv_ml", "rvedv_ml", "rvesv_ml")


@dataclass(frozen=True)
class PhenotypeRecord:
    lvm_g: float
    lvedv_ml: float
    lvesv_ml: float
    rvedv_ml: float
    rvesv_ml: float

    def as_dict(self) -> dict:
        return {f: getattr(self, f) for f in PHENOTYPE_FIELDS}

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in PHENOTYPE_FIELDS])


def phenotypes(seq: AnatomySequence) -> PhenotypeRecord:
    """Extract the five phenotypes. Raises ValueError when the LV is absent."""
    lv_counts = seq.counts(LV)
    if lv_counts.sum() == 0:
        raise ValueError("sequence contains no LV blood pool; phenotypes undefined")
    vv = seq.voxel_volume_ml
    rv_counts = seq.counts(RV)
    return PhenotypeRecord(
        lvm_g=seq.frames[0].count(MYO) * vv * MYO_DENSITY_G_PER_ML,
        lvedv_ml=lv_counts[0] * vv,
        lvesv_ml=lv_counts.min() * vv,
        rvedv_ml=rv_counts[0] * vv,
        rvesv_ml=rv_counts.min() * vv,
    )


def phenotype_diff(
    real: PhenotypeRecord, synth: list[PhenotypeRecord]
) -> tuple[dict, dict]:
    """Per-phenotype mean and minimal absolute difference against a sample set."""
    if not synth:
        raise ValueError("need at least one synthetic phenotype record")
    mean_diffs, best_diffs = {}, {}
    for f in PHENOTYPE_FIELDS:
        diffs = np.abs([getattr(s, f) - getattr(real, f) for s in synth])
        mean_diffs[f] = float(diffs.mean())
        best_diffs[f] = float(diffs.min())
    return mean_diffs, best_diffs
