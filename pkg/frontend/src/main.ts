/** Bootstrap: join a session from the URL fragment or create one from an
 * uploaded instance file, then alternate query screens with live
 * convergence feedback. */

import { SessionApi } from "./api.js";
import { SessionController } from "./session.js";
import { renderConvergencePanel, renderHistory, renderQueryScreen } from "./views.js";

const api = new SessionApi("");
const controller = new SessionController(api);

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function rerender(): void {
  const view = controller.view;
  if (!view) return;
  window.location.hash = `session=${view.id}`;
  byId("create-panel").style.display = "none";
  renderQueryScreen(byId("query-panel"), controller, rerender);
  renderConvergencePanel(byId("convergence-panel"), view);
  renderHistory(byId("history-panel"), view);
}

async function createFromForm(): Promise<void> {
  const fileInput = byId("instance-file") as HTMLInputElement;
  const tauInput = byId("tau") as HTMLInputElement;
  const senseInput = byId("sense") as HTMLSelectElement;
  const status = byId("create-status");
  const file = fileInput.files?.[0];
  if (!file) {
    status.textContent = "choose an instance JSON file first";
    return;
  }
  try {
    const instance = JSON.parse(await file.text());
    const tauRaw = tauInput.value.trim();
    const tau = tauRaw === "" ? 0 : tauRaw === "inf" ? ("inf" as const) : Number(tauRaw);
    await controller.create({
      instance,
      tau,
      sense: senseInput.value === "max" ? "max" : "min",
    });
    rerender();
  } catch (err) {
    status.textContent = `could not start session: ${err instanceof Error ? err.message : err}`;
  }
}

async function boot(): Promise<void> {
  const match = window.location.hash.match(/session=([\w-]+)/);
  if (match) {
    try {
      await controller.load(match[1]);
      rerender();
      return;
    } catch {
      window.location.hash = "";
    }
  }
  byId("create-panel").style.display = "";
  byId("create-button").addEventListener("click", () => void createFromForm());
}

void boot();
