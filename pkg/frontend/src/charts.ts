/** Minimal SVG charts: a line with optional confidence band and markers.
 *
 * Scaling happens in a plain data model first so tests can check geometry
 * without parsing markup.
 */

export interface ChartPoint {
  x: number;
  y: number;
  cx: number; // pixel coords
  cy: number;
}

export interface BandPoint {
  cx: number;
  cyLow: number;
  cyHigh: number;
}

export interface ChartModel {
  width: number;
  height: number;
  points: ChartPoint[];
  band: BandPoint[] | null;
  marker: number | null; // index into points
}

export interface ChartOptions {
  width?: number;
  height?: number;
  pad?: number;
  markerIndex?: number | null;
}

/** Lay out (x, y ± half) series in pixel space. Null ys are dropped; the
 * band is omitted when every halfwidth is missing or zero. */
export function chartModel(
  xs: readonly number[],
  ys: readonly (number | null)[],
  halves?: readonly (number | null)[],
  options: ChartOptions = {},
): ChartModel {
  const width = options.width ?? 280;
  const height = options.height ?? 120;
  const pad = options.pad ?? 10;
  const defined: Array<{ x: number; y: number; half: number }> = [];
  xs.forEach((x, i) => {
    const y = ys[i];
    if (y === null || y === undefined || !Number.isFinite(y)) return;
    const half = halves?.[i] ?? 0;
    defined.push({ x, y, half: half === null || !Number.isFinite(half) ? 0 : half });
  });
  if (defined.length === 0) {
    return { width, height, points: [], band: null, marker: null };
  }

  const xLo = Math.min(...defined.map((d) => d.x));
  const xHi = Math.max(...defined.map((d) => d.x));
  const yLo = Math.min(...defined.map((d) => d.y - d.half));
  const yHi = Math.max(...defined.map((d) => d.y + d.half));
  const xSpan = xHi - xLo || 1;
  const ySpan = yHi - yLo || 1;
  const sx = (x: number) => pad + ((x - xLo) / xSpan) * (width - 2 * pad);
  const sy = (y: number) => height - pad - ((y - yLo) / ySpan) * (height - 2 * pad);

  const points = defined.map((d) => ({ x: d.x, y: d.y, cx: sx(d.x), cy: sy(d.y) }));
  const hasBand = defined.some((d) => d.half > 0);
  const band = hasBand
    ? defined.map((d) => ({ cx: sx(d.x), cyLow: sy(d.y - d.half), cyHigh: sy(d.y + d.half) }))
    : null;
  const marker =
    options.markerIndex === null || options.markerIndex === undefined
      ? null
      : Math.min(Math.max(options.markerIndex, 0), points.length - 1);
  return { width, height, points, band, marker };
}

function fmt(v: number): string {
  return v.toFixed(1);
}

export function renderChartSvg(model: ChartModel, color = "#e4572e"): string {
  const parts: string[] = [
    `<svg viewBox="0 0 ${model.width} ${model.height}" preserveAspectRatio="none" class="chart">`,
  ];
  if (model.band) {
    const upper = model.band.map((b) => `${fmt(b.cx)},${fmt(b.cyHigh)}`);
    const lower = [...model.band].reverse().map((b) => `${fmt(b.cx)},${fmt(b.cyLow)}`);
    parts.push(`<polygon class="band" fill="${color}33" points="${upper.concat(lower).join(" ")}"/>`);
  }
  if (model.points.length > 0) {
    const line = model.points.map((p) => `${fmt(p.cx)},${fmt(p.cy)}`).join(" ");
    parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.5" points="${line}"/>`,
    );
    model.points.forEach((p, i) => {
      const r = i === model.marker ? 4 : 2.5;
      const cls = i === model.marker ? "pt marker" : "pt";
      parts.push(
        `<circle class="${cls}" data-index="${i}" cx="${fmt(p.cx)}" cy="${fmt(p.cy)}" r="${r}" fill="${color}"/>`,
      );
    });
  }
  parts.push("</svg>");
  return parts.join("");
}
