import { describe, expect, it } from "vitest";

import {
  b64ToBytes,
  bytesToB64,
  decodeFrame,
  encodeFrame,
  rleDecode,
  rleEncode,
} from "../src/codecs";
import { FX } from "./fixtures";

const DIMS = FX.dims;
const F0 = Uint8Array.from(FX.frame0_labels);

describe("frame codecs against recorded server bytes", () => {
  it("decodes the raw_b64 fixture to the exact labels", () => {
    expect(Array.from(decodeFrame(FX.frame0_raw_b64, "raw_b64", DIMS))).toEqual(
      Array.from(F0),
    );
  });

  it("decodes the rle_b64 fixture to the exact labels", () => {
    expect(Array.from(decodeFrame(FX.frame0_rle_b64, "rle_b64", DIMS))).toEqual(
      Array.from(F0),
    );
  });

  it("encodes to byte-identical base64 for both codecs", () => {
    expect(encodeFrame(F0, "raw_b64")).toBe(FX.frame0_raw_b64);
    expect(encodeFrame(F0, "rle_b64")).toBe(FX.frame0_rle_b64);
  });

  it("round-trips random volumes through both codecs", () => {
    let state = 12345;
    const rand = () => (state = (state * 1103515245 + 12345) & 0x7fffffff) % 4;
    const flat = Uint8Array.from({ length: 240 }, () => rand());
    for (const codec of ["raw_b64", "rle_b64"] as const) {
      const decoded = decodeFrame(encodeFrame(flat, codec), codec, [8, 6, 5]);
      expect(Array.from(decoded)).toEqual(Array.from(flat));
    }
  });

  it("run-length is much smaller than raw on constant volumes", () => {
    const flat = new Uint8Array(32 * 32 * 16).fill(2);
    expect(encodeFrame(flat, "rle_b64").length * 10).toBeLessThan(
      encodeFrame(flat, "raw_b64").length,
    );
  });

  it("rejects frames whose voxel count does not match the dims", () => {
    expect(() => decodeFrame(FX.frame0_raw_b64, "raw_b64", [4, 4, 4])).toThrow(/voxels/);
  });

  it("rejects invalid base64", () => {
    expect(() => decodeFrame("!!!not base64!!!", "raw_b64", DIMS)).toThrow(/base64/);
    expect(() => b64ToBytes("abc")).toThrow(/base64/);
  });

  it("rejects truncated run-length payloads", () => {
    expect(() => rleDecode(new Uint8Array(7))).toThrow(/multiple of 5/);
  });

  it("run-length layout is (value u8, count u32le)", () => {
    const encoded = rleEncode(Uint8Array.from([0, 0, 1, 1, 1, 2]));
    expect(Array.from(encoded)).toEqual([
      0, 2, 0, 0, 0,
      1, 3, 0, 0, 0,
      2, 1, 0, 0, 0,
    ]);
    expect(Array.from(rleDecode(encoded))).toEqual([0, 0, 1, 1, 1, 2]);
  });

  it("base64 helpers invert each other on long buffers", () => {
    const bytes = Uint8Array.from({ length: 70000 }, (_, i) => i % 251);
    expect(Array.from(b64ToBytes(bytesToB64(bytes)))).toEqual(Array.from(bytes));
  });
});
