/** Slice extraction and colormapping for canvas display.
 *
 * Volumes are C-order over (X, Y, Z): flat index (x * Y + y) * Z + z. The
 * axial view fixes z and shows x across, y down.
 */

export const PALETTE: Record<number, [number, number, number, number]> = {
  0: [16, 20, 24, 255], // background
  1: [228, 87, 46, 255], // LV blood pool
  2: [118, 176, 65, 255], // LV myocardium
  3: [23, 190, 187, 255], // RV blood pool
};

const UNKNOWN: [number, number, number, number] = [255, 0, 255, 255];

export function midSliceIndex(depth: number): number {
  return depth >> 1;
}

/** Row-major X-wide, Y-tall label image at depth z. */
export function extractAxialSlice(
  flat: Uint8Array,
  dims: readonly [number, number, number],
  z: number,
): Uint8Array {
  const [X, Y, Z] = dims;
  if (z < 0 || z >= Z) throw new Error(`slice ${z} outside depth ${Z}`);
  const out = new Uint8Array(X * Y);
  for (let y = 0; y < Y; y++) {
    for (let x = 0; x < X; x++) {
      out[y * X + x] = flat[(x * Y + y) * Z + z]!;
    }
  }
  return out;
}

export function sliceToRgba(slice: Uint8Array): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(new ArrayBuffer(slice.length * 4));
  for (let i = 0; i < slice.length; i++) {
    const rgba = PALETTE[slice[i]!] ?? UNKNOWN;
    out.set(rgba, i * 4);
  }
  return out;
}

export function drawSlice(
  canvas: HTMLCanvasElement,
  flat: Uint8Array,
  dims: readonly [number, number, number],
  z: number,
): void {
  const [X, Y] = dims;
  canvas.width = X;
  canvas.height = Y;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const image = new ImageData(sliceToRgba(extractAxialSlice(flat, dims, z)), X, Y);
  ctx.putImageData(image, 0, 0);
}
