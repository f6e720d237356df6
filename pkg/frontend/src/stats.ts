/** Client-side recounts of the numbers the service reports.
 *
 * These deliberately duplicate the server math: the volume curve and the
 * phenotype panel double as a live integrity check of decoded payloads.
 */

import type { Phenotypes } from "./types";

export const BACKGROUND = 0;
export const LV = 1;
export const MYO = 2;
export const RV = 3;

export const MYO_DENSITY_G_PER_ML = 1.05;

export function labelCount(flat: Uint8Array, label: number): number {
  let n = 0;
  for (let i = 0; i < flat.length; i++) if (flat[i] === label) n++;
  return n;
}

export function voxelVolumeMl(spacing: readonly number[]): number {
  return spacing.reduce((a, b) => a * b, 1) / 1000;
}

export interface VolumeCurves {
  lvMl: number[];
  rvMl: number[];
}

export function volumeCurves(frames: Uint8Array[], spacing: readonly number[]): VolumeCurves {
  const vv = voxelVolumeMl(spacing);
  return {
    lvMl: frames.map((f) => labelCount(f, LV) * vv),
    rvMl: frames.map((f) => labelCount(f, RV) * vv),
  };
}

/** Earliest index of the minimum, the end-systole convention. */
export function minFrameIndex(values: readonly number[]): number {
  if (values.length === 0) throw new Error("empty series has no minimum");
  let best = 0;
  for (let i = 1; i < values.length; i++) {
    if (values[i]! < values[best]!) best = i;
  }
  return best;
}

/** Recompute the five phenotypes from decoded frames; null when no LV voxels. */
export function phenotypesFromFrames(
  frames: Uint8Array[],
  spacing: readonly number[],
): Phenotypes | null {
  const vv = voxelVolumeMl(spacing);
  const lvCounts = frames.map((f) => labelCount(f, LV));
  if (lvCounts.reduce((a, b) => a + b, 0) === 0) return null;
  const rvCounts = frames.map((f) => labelCount(f, RV));
  return {
    lvm_g: labelCount(frames[0]!, MYO) * vv * MYO_DENSITY_G_PER_ML,
    lvedv_ml: lvCounts[0]! * vv,
    lvesv_ml: Math.min(...lvCounts) * vv,
    rvedv_ml: rvCounts[0]! * vv,
    rvesv_ml: Math.min(...rvCounts) * vv,
  };
}

export function mean(values: readonly number[]): number {
  if (values.length === 0) throw new Error("mean of empty sample");
  return values.reduce((a, b) => a + b, 0) / values.length;
}

/** Sample standard deviation (ddof 1); defined as 0 for a single value. */
export function sampleSd(values: readonly number[]): number {
  if (values.length <= 1) return 0;
  const m = mean(values);
  const ss = values.reduce((a, b) => a + (b - m) * (b - m), 0);
  return Math.sqrt(ss / (values.length - 1));
}

/** 95% confidence halfwidth, matching the service's sweep tables. */
export function ciHalf(values: readonly number[]): number {
  return (1.96 * sampleSd(values)) / Math.sqrt(values.length);
}

/** Overlap coefficient for one label; two empty masks count as a match. */
export function dice(a: Uint8Array, b: Uint8Array, label: number): number {
  if (a.length !== b.length) throw new Error("dice needs equal-size volumes");
  let na = 0;
  let nb = 0;
  let inter = 0;
  for (let i = 0; i < a.length; i++) {
    const inA = a[i] === label;
    const inB = b[i] === label;
    if (inA) na++;
    if (inB) nb++;
    if (inA && inB) inter++;
  }
  return na + nb === 0 ? 1 : (2 * inter) / (na + nb);
}
