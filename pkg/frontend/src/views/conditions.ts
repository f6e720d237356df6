/** Clinical condition controls: sliders for the continuous factors bounded
 * by the model's normalization window, selectors for age group and gender. */

import { AGE_GROUPS, clampConditions } from "../state";
import type { Bounds, Conditions, Gender } from "../types";

export interface ConditionsForm {
  root: HTMLElement;
  get(): Conditions;
  set(next: Conditions): void;
}

interface SliderSpec {
  key: "weight" | "height" | "sbp";
  label: string;
  unit: string;
  range: [number, number];
}

export function createConditionsForm(
  bounds: Bounds,
  initial: Conditions,
  onChange: (c: Conditions) => void,
): ConditionsForm {
  const root = document.createElement("div");
  root.className = "conditions";
  let current = clampConditions(initial, bounds);

  const sliders: SliderSpec[] = [
    { key: "weight", label: "weight", unit: "kg", range: bounds.weight_kg },
    { key: "height", label: "height", unit: "cm", range: bounds.height_cm },
    { key: "sbp", label: "SBP", unit: "mmHg", range: bounds.sbp_mmhg },
  ];

  const readouts = new Map<string, HTMLElement>();
  const inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();

  const ageSelect = document.createElement("select");
  for (const midpoint of AGE_GROUPS) {
    const option = document.createElement("option");
    option.value = String(midpoint);
    option.textContent = `${midpoint - 5}-${midpoint + 4} y`;
    ageSelect.appendChild(option);
  }
  inputs.set("age", ageSelect);

  const genderSelect = document.createElement("select");
  for (const g of ["female", "male"] as Gender[]) {
    const option = document.createElement("option");
    option.value = g;
    option.textContent = g;
    genderSelect.appendChild(option);
  }
  inputs.set("gender", genderSelect);

  const row = (label: string, control: HTMLElement, readout?: HTMLElement) => {
    const div = document.createElement("label");
    div.className = "cond-row";
    const span = document.createElement("span");
    span.textContent = label;
    div.append(span, control);
    if (readout) div.appendChild(readout);
    root.appendChild(div);
  };

  row("age group", ageSelect);
  row("gender", genderSelect);

  for (const spec of sliders) {
    const input = document.createElement("input");
    input.type = "range";
    input.min = String(spec.range[0]);
    input.max = String(spec.range[1]);
    input.step = "0.5";
    const readout = document.createElement("em");
    readouts.set(spec.key, readout);
    inputs.set(spec.key, input);
    row(`${spec.label} (${spec.unit})`, input, readout);
  }

  const syncControls = () => {
    ageSelect.value = String(nearestAgeGroup(current.age));
    genderSelect.value = current.gender;
    for (const spec of sliders) {
      (inputs.get(spec.key) as HTMLInputElement).value = String(current[spec.key]);
      readouts.get(spec.key)!.textContent = current[spec.key].toFixed(1);
    }
  };

  const readControls = (): Conditions =>
    clampConditions(
      {
        age: Number(ageSelect.value),
        gender: genderSelect.value as Gender,
        weight: Number((inputs.get("weight") as HTMLInputElement).value),
        height: Number((inputs.get("height") as HTMLInputElement).value),
        sbp: Number((inputs.get("sbp") as HTMLInputElement).value),
      },
      bounds,
    );

  root.addEventListener("input", () => {
    current = readControls();
    syncControls();
    onChange(current);
  });

  syncControls();
  return {
    root,
    get: () => current,
    set: (next) => {
      current = clampConditions(next, bounds);
      syncControls();
    },
  };
}

function nearestAgeGroup(age: number): number {
  let best = AGE_GROUPS[0]!;
  for (const g of AGE_GROUPS) {
    if (Math.abs(g - age) < Math.abs(best - age)) best = g;
  }
  return best;
}
