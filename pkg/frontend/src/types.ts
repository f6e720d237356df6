/** Wire types mirroring the HTTP service. */

export type Gender = "female" | "male";

export interface Conditions {
  age: number;
  gender: Gender;
  weight: number;
  height: number;
  sbp: number;
}

export interface Bounds {
  weight_kg: [number, number];
  height_cm: [number, number];
  sbp_mmhg: [number, number];
}

export interface ModelInfo {
  grid_dims: [number, number, number];
  t_frames: number;
  z0_dim: number;
  zc_dim: number;
  channels: number[];
  beta: number;
  bounds: Bounds;
  frame_period_s: number;
  format_version: number;
  codecs: string[];
  sweep_factors: string[];
}

export type Codec = "raw_b64" | "rle_b64";

export const PHENOTYPE_FIELDS = [
  "lvm_g",
  "lvedv_ml",
  "lvesv_ml",
  "rvedv_ml",
  "rvesv_ml",
] as const;

export type PhenotypeField = (typeof PHENOTYPE_FIELDS)[number];

export type Phenotypes = Record<PhenotypeField, number>;

export interface SequencePayload {
  dims: [number, number, number];
  spacing_mm: [number, number, number];
  t_frames: number;
  frame_period_s: number;
  codec: Codec;
  frames: string[];
  phenotypes: Phenotypes | null;
}

export interface VolumePayload {
  dims: number[];
  spacing_mm: number[];
  codec: Codec;
  frame: string;
}

export interface GenerateRequest {
  conditions: Conditions;
  n: number;
  seed: number;
  codec: Codec;
}

export interface GenerateResponse {
  n: number;
  seed: number;
  sequences: SequencePayload[];
}

export type CompleteMode = "posterior_mean" | "sample";

export interface CompleteRequest {
  x0: VolumePayload;
  conditions: Conditions;
  mode: CompleteMode;
  seed: number;
  codec: Codec;
}

export interface CompleteResponse {
  mode: CompleteMode;
  seed: number;
  sequence: SequencePayload;
}

export interface SweepRequest {
  base_conditions: Conditions;
  factor: string;
  values: (number | string)[];
  n: number;
  seed: number;
  fix_latent: boolean;
  include_samples?: boolean;
  codec?: Codec;
}

export interface SweepResponse {
  factor: string;
  values: (number | string)[];
  n: number;
  mean: Record<string, (number | null)[]>;
  ci_half: Record<string, (number | null)[]>;
  defined_counts: number[];
  sequences?: SequencePayload[][];
}

/** Subject directory metadata as written next to the raw frame files. */
export interface SubjectMeta {
  dims: [number, number, number];
  spacing_mm: [number, number, number];
  t_frames: number;
  frame_period_s: number;
  conditions: {
    age_years: number;
    gender: Gender;
    weight_kg: number;
    height_cm: number;
    sbp_mmhg: number;
  } | null;
  format_version: number;
}
