import type { ConsoleView, TreeRow } from "./view.js";
import { latestCycleReports, rowKey, violatedIntentIds, violatedScopeKeys } from "./view.js";
import type { ReportRecord } from "./types.js";

/**
 * Every number on screen goes through here.  String() round-trips the exact
 * value from the API record, so the display byte-matches what the service
 * sent; no rounding, no arithmetic.
 */
export function fmt(value: number): string {
  return String(value);
}

function label(row: TreeRow): string {
  return "  ".repeat(row.depth) + row.id;
}

export function renderTree(view: ConsoleView): string[] {
  const violated = violatedScopeKeys(view);
  const lines: string[] = [];
  for (const row of view.tree) {
    const mark = violated.has(rowKey(row)) ? " !" : "  ";
    const snap = row.snapshot;
    let line =
      `${label(row).padEnd(16)}${mark} ` +
      `composite=${fmt(snap.composite)}  controls=${fmt(snap.controls)}  ` +
      `misconfig=${fmt(snap.misconfig)}  surface=${fmt(snap.surface)}`;
    if (row.state) line += `  state=${row.state}`;
    lines.push(line);
  }
  return lines;
}

export function renderIntents(view: ConsoleView): string[] {
  if (view.intents.length === 0) return ["(no intents)"];
  const violated = violatedIntentIds(view);
  return view.intents.map((intent) => {
    const target = intent.scope_id ? `${intent.scope}:${intent.scope_id}` : intent.scope;
    const badge = violated.has(intent.id) ? "VIOLATED" : "ok";
    let line = `${intent.id.padEnd(22)} ${target.padEnd(18)} threshold=${fmt(intent.threshold)}  ${badge}`;
    if (intent.parent) line += `  parent=${intent.parent}`;
    return line;
  });
}

function rankedContributions(report: ReportRecord): string {
  // display ordering only; the values themselves come straight off the record
  return Object.entries(report.contributions)
    .sort((a, b) => b[1] - a[1])
    .map(([name, value]) => `${name}=${fmt(value)}`)
    .join(" > ");
}

export function renderReports(view: ConsoleView, limit = 6): string[] {
  const cycle = latestCycleReports(view);
  if (cycle.length === 0) return ["(no violations)"];
  return cycle.slice(-limit).map(
    (r) =>
      `t=${fmt(r.time)}  ${r.intent}  observed=${fmt(r.observed)}  ` +
      `shortfall=${fmt(r.shortfall)}  top=${r.top_contributor}  [${rankedContributions(r)}]`,
  );
}

export function renderScreen(view: ConsoleView): string {
  const lines = [
    `t=${fmt(view.clock)}  scans=${view.scanCount}  digest=${view.digest.slice(0, 12)}`,
    "",
    ...renderTree(view),
    "",
    "intents:",
    ...renderIntents(view),
    "",
    "latest reports:",
    ...renderReports(view),
  ];
  if (view.status) lines.push("", view.status);
  return lines.join("\n") + "\n";
}
