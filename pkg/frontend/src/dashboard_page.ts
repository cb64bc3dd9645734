/** DOM wiring for the interrogator dashboard: metric tiles plus the
 * per-trial table, refreshed on an interval. */

import { HarnessApi } from "./api.js";
import { fetchDashboardData, metricCells, rowCells } from "./dashboard.js";

const REFRESH_MS = 3000;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export function startDashboardPage(): void {
  const api = new HarnessApi("");
  const metrics = el<HTMLElement>("metrics");
  const tbody = el<HTMLTableSectionElement>("trial-rows");
  const empty = el<HTMLElement>("empty-state");
  const openList = el<HTMLElement>("open-trials");

  async function refresh(): Promise<void> {
    const data = await fetchDashboardData(api);
    const report = data.report;

    if (report.n_trials === 0) {
      empty.hidden = false;
      metrics.replaceChildren();
      tbody.replaceChildren();
    } else {
      empty.hidden = true;
      metrics.replaceChildren(
        ...metricCells(report).map(([label, value]) => {
          const tile = document.createElement("div");
          tile.className = "metric";
          const v = document.createElement("strong");
          v.textContent = value;
          const l = document.createElement("span");
          l.textContent = label;
          tile.append(v, l);
          return tile;
        }),
      );
      tbody.replaceChildren(
        ...report.per_trial.map((row) => {
          const tr = document.createElement("tr");
          for (const cell of rowCells(row)) {
            const td = document.createElement("td");
            td.textContent = cell;
            tr.append(td);
          }
          return tr;
        }),
      );
    }

    openList.textContent = data.openTrialIds.length
      ? `open trials (no rates yet): ${data.openTrialIds.join(", ")}`
      : "no open trials";
  }

  const tick = (): void => {
    void refresh().catch((err) => {
      openList.textContent = `refresh failed: ${String(err)}`;
    });
  };
  tick();
  window.setInterval(tick, REFRESH_MS);
}

startDashboardPage();
