/** Frame codecs shared with the service: base64 of raw uint8 voxels or of
 * (value u8, run-length u32 little-endian) pairs. */

import type { Codec } from "./types";

const B64_RE = /^[A-Za-z0-9+/]*={0,2}$/;

export function b64ToBytes(data: string): Uint8Array {
  if (data.length % 4 !== 0 || !B64_RE.test(data)) {
    throw new Error("frame is not valid base64");
  }
  const bin = atob(data);
  const out = new Uint8Array(bin.length);
  for (let i = 0; i < bin.length; i++) out[i] = bin.charCodeAt(i);
  return out;
}

export function bytesToB64(bytes: Uint8Array): string {
  let bin = "";
  const chunk = 0x2000; // String.fromCharCode argument limit safety
  for (let i = 0; i < bytes.length; i += chunk) {
    bin += String.fromCharCode(...bytes.subarray(i, i + chunk));
  }
  return btoa(bin);
}

export function rleDecode(payload: Uint8Array): Uint8Array {
  if (payload.length % 5 !== 0) {
    throw new Error(`run-length payload must be a multiple of 5 bytes, got ${payload.length}`);
  }
  const view = new DataView(payload.buffer, payload.byteOffset, payload.byteLength);
  let total = 0;
  for (let i = 0; i < payload.length; i += 5) total += view.getUint32(i + 1, true);
  const out = new Uint8Array(total);
  let at = 0;
  for (let i = 0; i < payload.length; i += 5) {
    const value = view.getUint8(i);
    const count = view.getUint32(i + 1, true);
    out.fill(value, at, at + count);
    at += count;
  }
  return out;
}

export function rleEncode(flat: Uint8Array): Uint8Array {
  const runs: Array<[number, number]> = [];
  let i = 0;
  while (i < flat.length) {
    const value = flat[i]!;
    let j = i + 1;
    while (j < flat.length && flat[j] === value) j++;
    runs.push([value, j - i]);
    i = j;
  }
  const out = new Uint8Array(runs.length * 5);
  const view = new DataView(out.buffer);
  runs.forEach(([value, count], k) => {
    view.setUint8(k * 5, value);
    view.setUint32(k * 5 + 1, count, true);
  });
  return out;
}

export function voxelCount(dims: readonly number[]): number {
  return dims.reduce((a, b) => a * b, 1);
}

/** Decode one frame to a flat C-order uint8 label array of prod(dims) voxels. */
export function decodeFrame(data: string, codec: Codec, dims: readonly number[]): Uint8Array {
  const raw = b64ToBytes(data);
  const flat = codec === "raw_b64" ? raw : rleDecode(raw);
  const n = voxelCount(dims);
  if (flat.length !== n) {
    throw new Error(`frame decodes to ${flat.length} voxels, dims [${dims}] require ${n}`);
  }
  return flat;
}

export function encodeFrame(flat: Uint8Array, codec: Codec): string {
  return bytesToB64(codec === "raw_b64" ? flat : rleEncode(flat));
}
