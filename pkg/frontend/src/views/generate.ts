/** Sample anatomies for the current conditions and watch the cycle. */

import { ApiClient, ApiError, RequestSlot, isAbort } from "../api";
import { cacheKey, randomSeed } from "../state";
import type { Conditions, GenerateRequest, GenerateResponse, ModelInfo } from "../types";
import { createConditionsForm } from "./conditions";
import { createSequenceViewer } from "./viewer";

export interface GenerateView {
  root: HTMLElement;
  setConditions(c: Conditions): void;
}

export function createGenerateView(
  api: ApiClient,
  info: ModelInfo,
  shared: { conditions: Conditions },
  cache: Map<string, unknown>,
): GenerateView {
  const root = document.createElement("section");
  root.className = "view";
  const slot = new RequestSlot();

  const form = createConditionsForm(info.bounds, shared.conditions, (c) => {
    shared.conditions = c;
  });

  const seedInput = document.createElement("input");
  seedInput.type = "number";
  seedInput.value = "0";
  const sampleButton = document.createElement("button");
  sampleButton.textContent = "sample";
  const resampleButton = document.createElement("button");
  resampleButton.textContent = "resample";
  const status = document.createElement("p");
  status.className = "status";

  const controls = document.createElement("div");
  controls.className = "actions";
  const seedLabel = document.createElement("label");
  const seedSpan = document.createElement("span");
  seedSpan.textContent = "seed";
  seedLabel.append(seedSpan, seedInput);
  controls.append(seedLabel, sampleButton, resampleButton);

  const viewer = createSequenceViewer();
  root.append(form.root, controls, status, viewer.root);

  const run = async () => {
    const body: GenerateRequest = {
      conditions: form.get(),
      n: 1,
      seed: Number(seedInput.value) || 0,
      codec: "rle_b64",
    };
    const key = cacheKey("/generate", body);
    const cached = cache.get(key) as GenerateResponse | undefined;
    try {
      status.textContent = cached ? "cached" : "sampling...";
      const response = cached ?? (await slot.run((signal) => api.generate(body, signal)));
      cache.set(key, response);
      const sequence = response.sequences[0];
      if (!sequence) throw new Error("empty response");
      viewer.show(sequence, `seed ${response.seed}`);
      status.textContent = `seed ${response.seed}`;
    } catch (err) {
      if (isAbort(err)) return;
      status.textContent = err instanceof ApiError ? err.describe() : String(err);
    }
  };

  sampleButton.addEventListener("click", () => void run());
  resampleButton.addEventListener("click", () => {
    seedInput.value = String(randomSeed());
    void run();
  });

  return {
    root,
    setConditions(c) {
      form.set(c);
      shared.conditions = form.get();
    },
  };
}
