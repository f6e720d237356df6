/** What-if sweeps: vary one clinical factor, plot per-value phenotype means
 * with 95% confidence bands, click a point to load that condition. */

import { ApiClient, ApiError, RequestSlot, isAbort } from "../api";
import { chartModel, renderChartSvg } from "../charts";
import { AGE_GROUPS } from "../state";
import {
  PHENOTYPE_FIELDS,
  type Conditions,
  type ModelInfo,
  type SweepRequest,
  type SweepResponse,
} from "../types";
import { createConditionsForm } from "./conditions";

const SERIES_COLORS: Record<string, string> = {
  lvm_g: "#76b041",
  lvedv_ml: "#e4572e",
  lvesv_ml: "#b33b1a",
  rvedv_ml: "#17bebb",
  rvesv_ml: "#0f807e",
};

export function sweepValuesFor(factor: string, info: ModelInfo): (number | string)[] {
  switch (factor) {
    case "age":
      return [...AGE_GROUPS];
    case "gender":
      return ["female", "male"];
    case "weight":
      return spread(info.bounds.weight_kg);
    case "height":
      return spread(info.bounds.height_cm);
    case "sbp":
      return spread(info.bounds.sbp_mmhg);
    default:
      throw new Error(`unknown sweep factor ${factor}`);
  }
}

function spread([lo, hi]: [number, number], k = 5): number[] {
  const step = (hi - lo) / (k - 1);
  return Array.from({ length: k }, (_, i) => Math.round((lo + i * step) * 10) / 10);
}

export function createSweepView(
  api: ApiClient,
  info: ModelInfo,
  shared: { conditions: Conditions },
  onPick: (conditions: Conditions) => void,
): HTMLElement {
  const root = document.createElement("section");
  root.className = "view";
  const slot = new RequestSlot();

  const form = createConditionsForm(info.bounds, shared.conditions, (c) => {
    shared.conditions = c;
  });

  const factorSelect = document.createElement("select");
  for (const factor of info.sweep_factors) {
    const option = document.createElement("option");
    option.value = factor;
    option.textContent = factor;
    factorSelect.appendChild(option);
  }
  factorSelect.value = "age";

  const nInput = document.createElement("input");
  nInput.type = "number";
  nInput.min = "1";
  nInput.max = "500";
  nInput.value = "200";
  const seedInput = document.createElement("input");
  seedInput.type = "number";
  seedInput.value = "13";
  const fixLatent = document.createElement("input");
  fixLatent.type = "checkbox";
  fixLatent.checked = true;
  const runButton = document.createElement("button");
  runButton.textContent = "run sweep";
  const status = document.createElement("p");
  status.className = "status";
  const plots = document.createElement("div");
  plots.className = "plots";

  const controls = document.createElement("div");
  controls.className = "actions";
  controls.append(
    labelled("factor", factorSelect),
    labelled("samples per value", nInput),
    labelled("seed", seedInput),
    labelled("fix latent", fixLatent),
    runButton,
  );
  root.append(form.root, controls, status, plots);

  let lastValues: (number | string)[] = [];

  const renderPlots = (response: SweepResponse) => {
    plots.innerHTML = "";
    const numericXs = response.values.map((v, i) => (typeof v === "number" ? v : i));
    for (const field of PHENOTYPE_FIELDS) {
      const means = response.mean[field] ?? [];
      const halves = response.ci_half[field] ?? [];
      const model = chartModel(numericXs, means, halves);
      const panel = document.createElement("figure");
      panel.innerHTML =
        `<figcaption>${field} vs ${response.factor} (n=${response.n})</figcaption>` +
        renderChartSvg(model, SERIES_COLORS[field] ?? "#e4572e");
      panel.querySelectorAll("circle").forEach((node) => {
        node.addEventListener("click", () => {
          const index = Number(node.getAttribute("data-index"));
          const value = lastValues[index];
          if (value === undefined) return;
          const next = { ...form.get() } as Record<string, number | string>;
          next[response.factor] = value;
          onPick(next as unknown as Conditions);
        });
      });
      plots.appendChild(panel);
    }
  };

  const run = async () => {
    const factor = factorSelect.value;
    const body: SweepRequest = {
      base_conditions: form.get(),
      factor,
      values: sweepValuesFor(factor, info),
      n: Math.max(1, Number(nInput.value) || 1),
      seed: Number(seedInput.value) || 0,
      fix_latent: fixLatent.checked,
    };
    lastValues = body.values;
    status.textContent = "sweeping...";
    try {
      const t0 = performance.now();
      const response = await slot.run((signal) => api.sweep(body, signal));
      renderPlots(response);
      status.textContent = `${body.values.length} values x n=${body.n} in ${((performance.now() - t0) / 1000).toFixed(1)}s`;
    } catch (err) {
      if (isAbort(err)) return;
      status.textContent = err instanceof ApiError ? err.describe() : String(err);
    }
  };

  runButton.addEventListener("click", () => void run());
  fixLatent.addEventListener("change", () => void run());

  return root;
}

function labelled(text: string, control: HTMLElement): HTMLElement {
  const label = document.createElement("label");
  const span = document.createElement("span");
  span.textContent = text;
  label.append(span, control);
  return label;
}
