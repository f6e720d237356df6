/** Animated slice viewer plus the numbers derived from a decoded sequence:
 * payload phenotypes next to the client recount, and the per-frame LV/RV
 * volume curve with its end-systole marker. */

import { decodeFrame } from "../codecs";
import { chartModel, renderChartSvg } from "../charts";
import { drawSlice, midSliceIndex } from "../render";
import { clampFrame, nextFrame } from "../state";
import { minFrameIndex, phenotypesFromFrames, volumeCurves } from "../stats";
import { PHENOTYPE_FIELDS, type SequencePayload } from "../types";

export interface SequenceViewer {
  root: HTMLElement;
  show(payload: SequencePayload, caption?: string): void;
  clear(): void;
  dispose(): void;
}

export function createSequenceViewer(): SequenceViewer {
  const root = document.createElement("div");
  root.className = "viewer";

  const canvas = document.createElement("canvas");
  canvas.className = "slice";
  const caption = document.createElement("p");
  caption.className = "caption";

  const controls = document.createElement("div");
  controls.className = "playback";
  const playButton = document.createElement("button");
  playButton.textContent = "play";
  const frameSlider = document.createElement("input");
  frameSlider.type = "range";
  frameSlider.min = "0";
  frameSlider.value = "0";
  const frameLabel = document.createElement("em");
  const sliceSlider = document.createElement("input");
  sliceSlider.type = "range";
  sliceSlider.min = "0";
  sliceSlider.value = "0";
  const sliceLabel = document.createElement("em");
  const fpsInput = document.createElement("input");
  fpsInput.type = "number";
  fpsInput.min = "1";
  fpsInput.max = "30";
  fpsInput.value = "8";
  controls.append(
    playButton,
    labelled("frame", frameSlider, frameLabel),
    labelled("slice", sliceSlider, sliceLabel),
    labelled("fps", fpsInput),
  );

  const table = document.createElement("table");
  table.className = "phenotypes";
  const curve = document.createElement("div");
  curve.className = "curve";

  root.append(caption, canvas, controls, table, curve);

  let frames: Uint8Array[] = [];
  let payload: SequencePayload | null = null;
  let frame = 0;
  let z = 0;
  let timer: ReturnType<typeof setInterval> | null = null;

  const stop = () => {
    if (timer !== null) clearInterval(timer);
    timer = null;
    playButton.textContent = "play";
  };

  const redraw = () => {
    if (!payload || frames.length === 0) return;
    drawSlice(canvas, frames[frame]!, payload.dims, z);
    frameLabel.textContent = `${frame}/${payload.t_frames - 1}`;
    sliceLabel.textContent = String(z);
    frameSlider.value = String(frame);
    sliceSlider.value = String(z);
  };

  playButton.addEventListener("click", () => {
    if (!payload) return;
    if (timer !== null) {
      stop();
      return;
    }
    playButton.textContent = "pause";
    const fps = Math.max(1, Number(fpsInput.value) || 8);
    timer = setInterval(() => {
      frame = nextFrame(frame, payload!.t_frames);
      redraw();
    }, 1000 / fps);
  });
  frameSlider.addEventListener("input", () => {
    if (!payload) return;
    stop();
    frame = clampFrame(Number(frameSlider.value), payload.t_frames);
    redraw();
  });
  sliceSlider.addEventListener("input", () => {
    if (!payload) return;
    z = clampFrame(Number(sliceSlider.value), payload.dims[2]);
    redraw();
  });
  fpsInput.addEventListener("input", () => {
    if (timer !== null) {
      stop();
      playButton.click();
    }
  });

  const renderNumbers = () => {
    if (!payload) return;
    const recount = phenotypesFromFrames(frames, payload.spacing_mm);
    const rows = PHENOTYPE_FIELDS.map((field) => {
      const server = payload!.phenotypes ? payload!.phenotypes[field] : null;
      const client = recount ? recount[field] : null;
      const agree = server !== null && client !== null && Math.abs(server - client) < 1e-9;
      return `<tr class="${agree ? "ok" : "off"}"><td>${field}</td>` +
        `<td>${server === null ? "-" : server.toFixed(2)}</td>` +
        `<td>${client === null ? "-" : client.toFixed(2)}</td></tr>`;
    });
    table.innerHTML =
      `<tr><th>phenotype</th><th>server</th><th>recount</th></tr>${rows.join("")}`;

    const { lvMl, rvMl } = volumeCurves(frames, payload.spacing_mm);
    const xs = lvMl.map((_, i) => i);
    const esIndex = minFrameIndex(lvMl);
    const lv = chartModel(xs, lvMl, undefined, { markerIndex: esIndex });
    const rv = chartModel(xs, rvMl);
    curve.innerHTML =
      `<h4>volume over the cycle (mL), ES at frame ${esIndex}</h4>` +
      renderChartSvg(lv, "#e4572e") +
      renderChartSvg(rv, "#17bebb");
  };

  return {
    root,
    show(next, text) {
      stop();
      payload = next;
      frames = next.frames.map((data) => decodeFrame(data, next.codec, next.dims));
      frame = 0;
      z = midSliceIndex(next.dims[2]);
      frameSlider.max = String(next.t_frames - 1);
      sliceSlider.max = String(next.dims[2] - 1);
      caption.textContent = text ?? "";
      redraw();
      renderNumbers();
    },
    clear() {
      stop();
      payload = null;
      frames = [];
      caption.textContent = "";
      table.innerHTML = "";
      curve.innerHTML = "";
      const ctx = canvas.getContext("2d");
      ctx?.clearRect(0, 0, canvas.width, canvas.height);
    },
    dispose: stop,
  };
}

function labelled(text: string, ...controls: HTMLElement[]): HTMLElement {
  const label = document.createElement("label");
  const span = document.createElement("span");
  span.textContent = text;
  label.append(span, ...controls);
  return label;
}
