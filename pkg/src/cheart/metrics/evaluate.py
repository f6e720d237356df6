"""Batch evaluation of sequence completion and conditional generation.

Both entry points take callables rather than model objects, so any completer
or generator with the right signature can be scored: neural, baseline, or a
ground-truth oracle in tests.
"""
from __future__ import annotations

import warnings
from typing import Callable, Sequence

import numpy as np

from ..datakit.types import LV, MYO, RV, AnatomySequence, SegVolume, SubjectRecord
from .distributions import kl_divergence_hist, wasserstein_1d
from .overlap import assd, dice, hausdorff
from .phenotypes import PHENOTYPE_FIELDS, phenotype_diff, phenotypes

COMPLETION_STRUCTURES = {"lv": LV, "myo": MYO, "rv": RV}

Completer = Callable[[SegVolume, object], AnatomySequence]
Generator = Callable[[object, int, int], list]


def _frame_metrics(pred: SegVolume, truth: SegVolume) -> dict:
    out = {}
    for name, label in COMPLETION_STRUCTURES.items():
        entry = {"dice": dice(pred, truth, label), "hd_mm": np.nan, "assd_mm": np.nan}
        pred_has = bool((pred.labels == label).any())
        truth_has = bool((truth.labels == label).any())
        if pred_has and truth_has:
            entry["hd_mm"] = hausdorff(pred, truth, label)
            entry["assd_mm"] = assd(pred, truth, label)
        out[name] = entry
    return out


def _nanmean(values) -> float:
    # a structure never scored for distance stays nan without a warning
    arr = np.asarray(values, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return float(np.nanmean(arr))


def _sequence_avg_dice(a: AnatomySequence, b: AnatomySequence) -> float:
    """Dice averaged over all frames and the three structures."""
    if a.t_frames != b.t_frames:
        raise ValueError(f"sequences have {a.t_frames} and {b.t_frames} frames")
    vals = [
        dice(fa, fb, label)
        for fa, fb in zip(a.frames, b.frames)
        for label in COMPLETION_STRUCTURES.values()
    ]
    return float(np.mean(vals))


def _aggregate(per_frame: list[dict]) -> dict:
    """Mean over frames per structure, nan-skipping distances, plus 'avg' row."""
    agg = {}
    for name in COMPLETION_STRUCTURES:
        agg[name] = {
            metric: _nanmean([f[name][metric] for f in per_frame])
            for metric in ("dice", "hd_mm", "assd_mm")
        }
    agg["avg"] = {
        metric: float(np.mean([agg[name][metric] for name in COMPLETION_STRUCTURES]))
        for metric in ("dice", "hd_mm", "assd_mm")
    }
    return agg


def evaluate_completion(completer: Completer, records: Sequence[SubjectRecord]) -> dict:
    """Score a frame-0-to-sequence completer against ground-truth sequences.

    Distances are averaged over frames where both volumes contain the
    structure; frames with an empty prediction are counted, not scored.
    """
    if not records:
        raise ValueError("no subjects to evaluate")
    per_subject_frames: dict[str, list[dict]] = {}
    skipped_empty = 0
    for rec in records:
        completed = completer(rec.sequence.frames[0], rec.profile)
        if completed.t_frames != rec.sequence.t_frames:
            raise ValueError(
                f"completer returned {completed.t_frames} frames for subject "
                f"{rec.subject_id}, expected {rec.sequence.t_frames}"
            )
        frames = []
        for t in range(rec.sequence.t_frames):
            fm = _frame_metrics(completed.frames[t], rec.sequence.frames[t])
            skipped_empty += sum(1 for v in fm.values() if np.isnan(v["hd_mm"]))
            frames.append(fm)
        per_subject_frames[rec.subject_id] = frames

    per_subject = {sid: _aggregate(frames) for sid, frames in per_subject_frames.items()}
    per_subject_no0 = {sid: _aggregate(frames[1:]) for sid, frames in per_subject_frames.items()}

    def across_subjects(tables: dict) -> dict:
        out = {}
        for name in list(COMPLETION_STRUCTURES) + ["avg"]:
            out[name] = {
                metric: _nanmean([tables[sid][name][metric] for sid in tables])
                for metric in ("dice", "hd_mm", "assd_mm")
            }
        return out

    return {
        "n_subjects": len(records),
        "all_frames": across_subjects(per_subject),
        "excluding_frame0": across_subjects(per_subject_no0),
        "per_subject": per_subject,
        "skipped_empty": skipped_empty,
    }


def evaluate_generation(
    generator: Generator,
    records: Sequence[SubjectRecord],
    n: int = 20,
    seed: int = 0,
) -> dict:
    """Score condition-matched generation against each real subject.

    For every subject, `generator(profile, n, subject_seed)` supplies n
    synthetic sequences; phenotype differences and whole-sequence Dice are
    reported per subject (mean and best over the n samples) and averaged
    across subjects, and pooled synthetic phenotypes are compared to the
    real cohort distribution per phenotype.
    """
    if not records:
        raise ValueError("no subjects to evaluate")
    if n < 1:
        raise ValueError("need at least one sample per subject")
    subject_seeds = np.random.SeedSequence(seed).generate_state(len(records), np.uint64)

    per_subject = {}
    real_pool = {f: [] for f in PHENOTYPE_FIELDS}
    synth_pool = {f: [] for f in PHENOTYPE_FIELDS}
    for rec, sub_seed in zip(records, subject_seeds):
        samples = generator(rec.profile, n, int(sub_seed))
        if len(samples) != n:
            raise ValueError(f"generator returned {len(samples)} samples, expected {n}")
        real_ph = phenotypes(rec.sequence)
        synth_ph = [phenotypes(s) for s in samples]
        mean_d, best_d = phenotype_diff(real_ph, synth_ph)
        sample_dice = [_sequence_avg_dice(s, rec.sequence) for s in samples]
        per_subject[rec.subject_id] = {
            "mean": mean_d,
            "best": best_d,
            "dice_mean": float(np.mean(sample_dice)),
            "dice_best": float(np.max(sample_dice)),
        }
        for f in PHENOTYPE_FIELDS:
            real_pool[f].append(getattr(real_ph, f))
            synth_pool[f].extend(getattr(s, f) for s in synth_ph)

    return {
        "n_subjects": len(records),
        "n_samples_per_subject": n,
        "dice_mean": float(np.mean([per_subject[sid]["dice_mean"] for sid in per_subject])),
        "dice_best": float(np.mean([per_subject[sid]["dice_best"] for sid in per_subject])),
        "phenotype_mean_abs_diff": {
            f: float(np.mean([per_subject[sid]["mean"][f] for sid in per_subject]))
            for f in PHENOTYPE_FIELDS
        },
        "phenotype_best_abs_diff": {
            f: float(np.mean([per_subject[sid]["best"][f] for sid in per_subject]))
            for f in PHENOTYPE_FIELDS
        },
        "distribution": {
            f: {
                "kl": kl_divergence_hist(real_pool[f], synth_pool[f]),
                "wasserstein": wasserstein_1d(real_pool[f], synth_pool[f]),
            }
            for f in PHENOTYPE_FIELDS
        },
        "per_subject": per_subject,
    }
