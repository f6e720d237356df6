/** Upload a first frame, set conditions, and compare the completed cycle
 * against the upload. */

import { ApiClient, ApiError, RequestSlot, isAbort } from "../api";
import { bytesToB64, decodeFrame, voxelCount } from "../codecs";
import { drawSlice, extractAxialSlice, midSliceIndex } from "../render";
import { clampFrame } from "../state";
import { LV, MYO, RV, dice } from "../stats";
import type {
  CompleteMode,
  CompleteRequest,
  Conditions,
  ModelInfo,
  SubjectMeta,
} from "../types";
import { createConditionsForm } from "./conditions";
import { createSequenceViewer } from "./viewer";

export function createCompleteView(
  api: ApiClient,
  info: ModelInfo,
  shared: { conditions: Conditions },
): HTMLElement {
  const root = document.createElement("section");
  root.className = "view";
  const slot = new RequestSlot();

  const form = createConditionsForm(info.bounds, shared.conditions, (c) => {
    shared.conditions = c;
  });

  const metaInput = document.createElement("input");
  metaInput.type = "file";
  metaInput.accept = ".json,application/json";
  const frameInput = document.createElement("input");
  frameInput.type = "file";
  const modeSelect = document.createElement("select");
  for (const mode of ["posterior_mean", "sample"]) {
    const option = document.createElement("option");
    option.value = mode;
    option.textContent = mode;
    modeSelect.appendChild(option);
  }
  const seedInput = document.createElement("input");
  seedInput.type = "number";
  seedInput.value = "0";
  const runButton = document.createElement("button");
  runButton.textContent = "complete";
  const status = document.createElement("p");
  status.className = "status";

  const uploadPanel = document.createElement("div");
  uploadPanel.className = "upload-panel";
  const uploadCanvas = document.createElement("canvas");
  uploadCanvas.className = "slice";
  const uploadSlice = document.createElement("input");
  uploadSlice.type = "range";
  uploadSlice.min = "0";
  uploadSlice.value = "0";
  const diceReadout = document.createElement("p");
  diceReadout.className = "dice-readout";
  uploadPanel.append(uploadCanvas, uploadSlice, diceReadout);

  const viewer = createSequenceViewer();
  const sideBySide = document.createElement("div");
  sideBySide.className = "side-by-side";
  sideBySide.append(uploadPanel, viewer.root);

  const controls = document.createElement("div");
  controls.className = "actions";
  controls.append(
    labelled("meta.json", metaInput),
    labelled("frame .u8raw", frameInput),
    labelled("mode", modeSelect),
    labelled("seed", seedInput),
    runButton,
  );
  root.append(form.root, controls, status, sideBySide);

  let meta: SubjectMeta | null = null;
  let uploaded: Uint8Array | null = null;
  let completed0: Uint8Array | null = null;
  let z = 0;

  const redrawUpload = () => {
    if (!meta || !uploaded) return;
    drawSlice(uploadCanvas, uploaded, meta.dims, z);
    uploadSlice.value = String(z);
    if (!completed0) {
      diceReadout.textContent = "";
      return;
    }
    const a = extractAxialSlice(uploaded, meta.dims, z);
    const b = extractAxialSlice(completed0, meta.dims, z);
    const sliceScores = [LV, MYO, RV].map((l) => dice(a, b, l));
    const volScores = [LV, MYO, RV].map((l) => dice(uploaded!, completed0!, l));
    diceReadout.textContent =
      `slice ${z} dice lv/myo/rv ${sliceScores.map((d) => d.toFixed(3)).join("/")}` +
      ` | volume ${volScores.map((d) => d.toFixed(3)).join("/")}`;
  };

  metaInput.addEventListener("change", () => {
    const file = metaInput.files?.[0];
    if (!file) return;
    void file.text().then((text) => {
      try {
        meta = JSON.parse(text) as SubjectMeta;
      } catch {
        status.textContent = "meta.json does not parse";
        meta = null;
        return;
      }
      if (meta?.conditions) {
        form.set({
          age: meta.conditions.age_years,
          gender: meta.conditions.gender,
          weight: meta.conditions.weight_kg,
          height: meta.conditions.height_cm,
          sbp: meta.conditions.sbp_mmhg,
        });
        shared.conditions = form.get();
      }
      status.textContent = `grid ${meta?.dims.join("x")} loaded`;
      maybeShowUpload();
    });
  });

  frameInput.addEventListener("change", () => {
    const file = frameInput.files?.[0];
    if (!file) return;
    void file.arrayBuffer().then((buffer) => {
      uploaded = new Uint8Array(buffer);
      completed0 = null;
      maybeShowUpload();
    });
  });

  const maybeShowUpload = () => {
    if (!meta || !uploaded) return;
    if (uploaded.length !== voxelCount(meta.dims)) {
      status.textContent =
        `frame holds ${uploaded.length} voxels but meta dims ${meta.dims.join("x")} ` +
        `need ${voxelCount(meta.dims)}`;
      return;
    }
    z = midSliceIndex(meta.dims[2]);
    uploadSlice.max = String(meta.dims[2] - 1);
    redrawUpload();
  };

  uploadSlice.addEventListener("input", () => {
    if (!meta) return;
    z = clampFrame(Number(uploadSlice.value), meta.dims[2]);
    redrawUpload();
  });

  const run = async () => {
    if (!meta || !uploaded) {
      status.textContent = "upload meta.json and a frame first";
      return;
    }
    if (uploaded.length !== voxelCount(meta.dims)) return;
    const body: CompleteRequest = {
      x0: {
        dims: meta.dims,
        spacing_mm: meta.spacing_mm,
        codec: "raw_b64",
        frame: bytesToB64(uploaded),
      },
      conditions: form.get(),
      mode: modeSelect.value as CompleteMode,
      seed: Number(seedInput.value) || 0,
      codec: "rle_b64",
    };
    status.textContent = "completing...";
    try {
      const response = await slot.run((signal) => api.complete(body, signal));
      const seq = response.sequence;
      completed0 = decodeFrame(seq.frames[0]!, seq.codec, seq.dims);
      viewer.show(seq, `completed (${response.mode}, seed ${response.seed})`);
      status.textContent = "";
      redrawUpload();
    } catch (err) {
      if (isAbort(err)) return;
      status.textContent = err instanceof ApiError ? err.describe() : String(err);
    }
  };

  runButton.addEventListener("click", () => void run());

  return root;
}

function labelled(text: string, control: HTMLElement): HTMLElement {
  const label = document.createElement("label");
  const span = document.createElement("span");
  span.textContent = text;
  label.append(span, control);
  return label;
}
