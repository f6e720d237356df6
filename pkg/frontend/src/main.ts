import { ApiClient, ApiError } from "./api";
import { DEFAULT_CONDITIONS } from "./state";
import type { Conditions } from "./types";
import { createCompleteView } from "./views/complete";
import { createGenerateView } from "./views/generate";
import { createSweepView } from "./views/sweep";
import "./style.css";

async function boot(root: HTMLElement): Promise<void> {
  const api = new ApiClient("");
  root.innerHTML = "<p class='status'>loading model info...</p>";
  let info;
  try {
    info = await api.modelInfo();
  } catch (err) {
    const message = err instanceof ApiError ? err.describe() : String(err);
    root.innerHTML = "";
    const p = document.createElement("p");
    p.className = "status error";
    p.textContent = `service unreachable: ${message}`;
    const retry = document.createElement("button");
    retry.textContent = "retry";
    retry.addEventListener("click", () => void boot(root));
    root.append(p, retry);
    return;
  }

  root.innerHTML = "";
  const header = document.createElement("header");
  header.innerHTML =
    `<h1>cheart console</h1>` +
    `<p>grid ${info.grid_dims.join("x")} | ${info.t_frames} frames | ` +
    `${(info.frame_period_s * 1000).toFixed(0)} ms/frame</p>`;

  const shared: { conditions: Conditions } = { conditions: { ...DEFAULT_CONDITIONS } };
  const cache = new Map<string, unknown>();

  const generateView = createGenerateView(api, info, shared, cache);
  const sweepView = createSweepView(api, info, shared, (picked) => {
    generateView.setConditions(picked);
    activate("generate");
  });
  const completeView = createCompleteView(api, info, shared);

  const panes: Record<string, HTMLElement> = {
    generate: generateView.root,
    sweep: sweepView,
    complete: completeView,
  };

  const nav = document.createElement("nav");
  const buttons = new Map<string, HTMLButtonElement>();
  for (const name of Object.keys(panes)) {
    const button = document.createElement("button");
    button.textContent = name;
    button.addEventListener("click", () => activate(name));
    buttons.set(name, button);
    nav.appendChild(button);
  }

  const main = document.createElement("main");
  const activate = (name: string) => {
    for (const [paneName, pane] of Object.entries(panes)) {
      pane.style.display = paneName === name ? "" : "none";
      buttons.get(paneName)?.classList.toggle("active", paneName === name);
    }
  };
  main.append(...Object.values(panes));
  root.append(header, nav, main);
  activate("generate");
}

const appRoot = document.getElementById("app");
if (appRoot) void boot(appRoot);
