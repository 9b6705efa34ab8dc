import type {
  IntentRecord,
  LifecycleState,
  ReportRecord,
  ScenarioDetail,
  ScopeKind,
  SnapshotRecord,
  StateResponse,
} from "./types.js";

// nf id -> domain id, taken from the loaded scenario document
export type Membership = Record<string, string>;

export interface TreeRow {
  depth: 0 | 1 | 2;
  scope: ScopeKind;
  id: string;
  snapshot: SnapshotRecord;
  state?: LifecycleState;
}

export interface ConsoleView {
  clock: number;
  scanCount: number;
  digest: string;
  tree: TreeRow[];
  intents: IntentRecord[];
  reports: ReportRecord[];
  lastSeq: number;
  status: string;
}

export function emptyView(): ConsoleView {
  return {
    clock: 0,
    scanCount: 0,
    digest: "",
    tree: [],
    intents: [],
    reports: [],
    lastSeq: -1,
    status: "",
  };
}

export function membershipFromScenario(detail: ScenarioDetail): Membership {
  const out: Membership = {};
  for (const nf of detail.document.network_functions ?? []) {
    out[nf.id] = nf.domain;
  }
  return out;
}

/** Rebuild the hierarchy rows from a state response.  No score is touched. */
export function applyState(
  view: ConsoleView,
  state: StateResponse,
  membership: Membership,
): ConsoleView {
  const tree: TreeRow[] = [
    { depth: 0, scope: "network", id: "network", snapshot: state.network },
  ];
  for (const domainId of Object.keys(state.domains).sort()) {
    tree.push({ depth: 1, scope: "domain", id: domainId, snapshot: state.domains[domainId] });
    for (const nfId of Object.keys(state.nfs).sort()) {
      if (membership[nfId] !== domainId) continue;
      tree.push({
        depth: 2,
        scope: "nf",
        id: nfId,
        snapshot: state.nfs[nfId],
        state: state.states[nfId],
      });
    }
  }
  // status is command feedback and survives passive refreshes
  return {
    ...view,
    clock: state.clock,
    scanCount: state.scan_count,
    digest: state.digest,
    tree,
  };
}

export function applyIntents(view: ConsoleView, intents: IntentRecord[]): ConsoleView {
  return { ...view, intents };
}

/**
 * Fold a batch of report records into the view.  Records at or below the
 * last seen sequence number are duplicates (reconnects, overlapping polls)
 * and are dropped, so a record renders exactly once.
 */
export function applyReports(view: ConsoleView, incoming: ReportRecord[]): ConsoleView {
  const seen = new Set(view.reports.map((r) => r.seq));
  const fresh: ReportRecord[] = [];
  for (const record of [...incoming].sort((a, b) => a.seq - b.seq)) {
    if (record.seq <= view.lastSeq || seen.has(record.seq)) continue;
    seen.add(record.seq);
    fresh.push(record);
  }
  if (fresh.length === 0) return view;
  const reports = [...view.reports, ...fresh];
  return { ...view, reports, lastSeq: reports[reports.length - 1].seq };
}

export function withStatus(view: ConsoleView, status: string): ConsoleView {
  return { ...view, status };
}

/** Reports belonging to the most recent evaluation cycle. */
export function latestCycleReports(view: ConsoleView): ReportRecord[] {
  if (view.reports.length === 0) return [];
  const latest = Math.max(...view.reports.map((r) => r.time));
  return view.reports.filter((r) => r.time === latest);
}

function scopeKey(scope: ScopeKind, id: string | null | undefined): string {
  return id == null ? scope : `${scope}:${id}`;
}

/** Scope keys ("domain:ran", "network", ...) violating in the latest cycle. */
export function violatedScopeKeys(view: ConsoleView): Set<string> {
  return new Set(latestCycleReports(view).map((r) => scopeKey(r.scope, r.id)));
}

export function violatedIntentIds(view: ConsoleView): Set<string> {
  return new Set(latestCycleReports(view).map((r) => r.intent));
}

export function rowKey(row: TreeRow): string {
  return row.scope === "network" ? "network" : `${row.scope}:${row.id}`;
}

/** Client-side guard for intent submission; the API enforces it again. */
export function validThreshold(value: number): boolean {
  return Number.isFinite(value) && value >= 0 && value <= 1;
}
