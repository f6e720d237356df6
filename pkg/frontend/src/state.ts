/** UI state invariants: conditions clamped to the model's bounds, frame
 * index confined to [0, T-1], responses cached under a canonical key. */

import type { Bounds, Conditions } from "./types";

// matches the server-side validity window for age
export const AGE_MIN = 10;
export const AGE_MAX_EXCLUSIVE = 80;

/** Decade-group midpoints offered by the age selector. */
export const AGE_GROUPS = [15, 25, 35, 45, 55, 65, 75];

export const DEFAULT_CONDITIONS: Conditions = {
  age: 45,
  gender: "male",
  weight: 82,
  height: 169,
  sbp: 131,
};

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, v));
}

export function clampConditions(c: Conditions, bounds: Bounds): Conditions {
  return {
    age: clamp(Math.round(c.age), AGE_MIN, AGE_MAX_EXCLUSIVE - 1),
    gender: c.gender,
    weight: clamp(c.weight, bounds.weight_kg[0], bounds.weight_kg[1]),
    height: clamp(c.height, bounds.height_cm[0], bounds.height_cm[1]),
    sbp: clamp(c.sbp, bounds.sbp_mmhg[0], bounds.sbp_mmhg[1]),
  };
}

export interface Playback {
  frame: number;
  playing: boolean;
  fps: number;
}

export function clampFrame(frame: number, tFrames: number): number {
  return clamp(Math.trunc(frame), 0, tFrames - 1);
}

export function nextFrame(frame: number, tFrames: number): number {
  return (frame + 1) % tFrames;
}

/** Canonical cache key: endpoint plus body with sorted keys at every level. */
export function cacheKey(endpoint: string, body: unknown): string {
  return `${endpoint}:${stableStringify(body)}`;
}

export function stableStringify(value: unknown): string {
  if (value === null || typeof value !== "object") return JSON.stringify(value);
  if (Array.isArray(value)) return `[${value.map(stableStringify).join(",")}]`;
  const entries = Object.entries(value as Record<string, unknown>)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => `${JSON.stringify(k)}:${stableStringify(v)}`);
  return `{${entries.join(",")}}`;
}

export function randomSeed(): number {
  return Math.floor(Math.random() * 2 ** 31);
}
