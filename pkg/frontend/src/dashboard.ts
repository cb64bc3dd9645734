/** Dashboard data assembly: everything displayed comes straight from the
 * report and trial endpoints; no rates are computed client-side. */

import { HarnessApi, PerTrialRow, ReportPayload } from "./api.js";

export interface DashboardData {
  report: ReportPayload;
  openTrialIds: string[];
}

export async function fetchDashboardData(api: HarnessApi): Promise<DashboardData> {
  const report = await api.report();
  const [humanOpen, machineOpen] = await Promise.all([
    api.openTrials("human"),
    api.openTrials("machine"),
  ]);
  const openTrialIds = [...new Set([...humanOpen, ...machineOpen])].sort();
  return { report, openTrialIds };
}

export function formatMetric(value: number | undefined): string {
  return value === undefined ? "-" : value.toFixed(2) + "%";
}

export function metricCells(report: ReportPayload): [string, string][] {
  return [
    ["machine char", formatMetric(report.machine_char_rate)],
    ["human char", formatMetric(report.human_char_rate)],
    ["machine full", formatMetric(report.machine_full_rate)],
    ["human full", formatMetric(report.human_full_rate)],
  ];
}

export function rowCells(row: PerTrialRow): string[] {
  return [row.trial_id, String(row.machine_rate), String(row.human_rate), row.verdict];
}
