/** DOM rendering: the query screen, convergence panel, and history.
 *
 * Renderers take the last fetched SessionView and replace the target
 * element's content; no state lives in the DOM.
 */

import { SessionView } from "./api.js";
import { regionPath, trendPath } from "./chart.js";
import { SessionController } from "./session.js";

const STATUS_LABEL: Record<SessionView["status"], string> = {
  Running: "in progress",
  UniformOptimal: "optimal base certified (regret 0)",
  BoundBelowTau: "regret bound within tolerance",
  Contradiction: "answers were inconsistent",
  MaxIterations: "stopped at the iteration cap",
};

function el(tag: string, cls?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function attributeRow(label: string, values: number[]): HTMLElement {
  const row = el("div", "attr-row");
  row.appendChild(el("span", "attr-label", label));
  const cells = el("span", "attr-values");
  cells.textContent = values.map((v) => v.toString()).join("  ");
  row.appendChild(cells);
  return row;
}

export function renderQueryScreen(
  target: HTMLElement,
  controller: SessionController,
  onAnswered: () => void,
): void {
  target.replaceChildren();
  const view = controller.view;
  if (!view) return;
  if (!view.pending_query) {
    const card = el("div", "card recommendation");
    card.appendChild(el("h2", undefined, "Recommendation"));
    card.appendChild(el("p", "status-line", STATUS_LABEL[view.status]));
    if (view.best_base) {
      card.appendChild(
        el("p", "base-line", `Recommended base: {${view.best_base.join(", ")}}`),
      );
    }
    card.appendChild(
      el("p", "bound-line", `Final regret bound: ${formatBound(view.mmr_bound)}`),
    );
    target.appendChild(card);
    return;
  }
  const q = view.pending_query;
  const card = el("div", "card query");
  card.appendChild(el("h2", undefined, `Query ${view.iteration + 1}`));
  card.appendChild(
    el("p", undefined, `Which element carries more weight for you?`),
  );
  const choices = el("div", "choices");
  for (const [choice, element, attrs] of [
    ["l", q.l, q.attributes_l],
    ["k", q.k, q.attributes_k],
  ] as const) {
    const button = el("button", "choice") as HTMLButtonElement;
    button.dataset.choice = choice;
    button.appendChild(el("strong", undefined, `Element ${element}`));
    button.appendChild(attributeRow("attributes", attrs));
    button.disabled = controller.inFlight;
    button.addEventListener("click", async () => {
      const outcome = await controller.submit(choice);
      if (outcome !== "blocked") onAnswered();
    });
    choices.appendChild(button);
  }
  card.appendChild(choices);
  if (controller.lastError) {
    const banner = el("div", "banner error");
    banner.textContent = `Request failed (${controller.lastError}); your answer was not recorded. Pick again to retry.`;
    card.appendChild(banner);
  }
  target.appendChild(card);
}

function formatBound(value: number): string {
  return Math.abs(value) < 1e-12 ? "0" : value.toPrecision(4);
}

export function renderConvergencePanel(target: HTMLElement, view: SessionView): void {
  target.replaceChildren();
  const panel = el("div", "card convergence");
  panel.appendChild(el("h2", undefined, "Convergence"));

  const bounds = view.trace.map((row) => row.mmr_bound);
  const vertices = view.trace.map((row) => row.vertices);
  panel.appendChild(sparkline("Regret bound", bounds, "bound-spark"));
  panel.appendChild(sparkline("Region vertices", vertices, "vertex-spark"));

  const latest = view.trace[view.trace.length - 1];
  const summary = el("p", "trace-summary");
  summary.textContent =
    `iteration ${latest.iteration}: ${latest.vertices} vertices, ` +
    `${latest.disparity_pairs} open disparities, bound ${formatBound(latest.mmr_bound)}`;
  panel.appendChild(summary);

  if (view.region_vertices && view.region_vertices.length) {
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", "0 0 160 120");
    svg.setAttribute("class", "region-view");
    const path = document.createElementNS("http://www.w3.org/2000/svg", "path");
    path.setAttribute("d", regionPath(view.region_vertices, 160, 120));
    path.setAttribute("class", "region-outline");
    svg.appendChild(path);
    panel.appendChild(el("h3", undefined, "Uncertainty region"));
    panel.appendChild(svg);
  }
  target.appendChild(panel);
}

function sparkline(label: string, values: number[], cls: string): HTMLElement {
  const wrap = el("div", `spark ${cls}`);
  wrap.appendChild(el("span", "spark-label", label));
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("viewBox", "0 0 160 40");
  const path = document.createElementNS("http://www.w3.org/2000/svg", "path");
  path.setAttribute("d", trendPath(values, 160, 40));
  path.setAttribute("class", "spark-line");
  svg.appendChild(path);
  wrap.appendChild(svg);
  const current = values[values.length - 1];
  wrap.appendChild(el("span", "spark-value", formatBound(current)));
  return wrap;
}

export function renderHistory(target: HTMLElement, view: SessionView): void {
  target.replaceChildren();
  if (view.history.length === 0) return;
  const panel = el("div", "card history");
  panel.appendChild(el("h2", undefined, "Answers so far"));
  const list = el("ol");
  for (const entry of view.history) {
    const preferred = entry.answer === "l" ? entry.l : entry.k;
    const other = entry.answer === "l" ? entry.k : entry.l;
    list.appendChild(
      el("li", undefined, `element ${preferred} over element ${other}`),
    );
  }
  panel.appendChild(list);
  target.appendChild(panel);
}
