// Wire types for the scoring service.  These mirror the JSON the service
// emits byte for byte; the console never derives metric values itself, it
// only carries these records to the screen.

export type ScopeKind = "network" | "domain" | "nf";

export type LifecycleState =
  | "Secure"
  | "AttackSurfaceExpanded"
  | "VulnerabilityExposed"
  | "Compromised"
  | "Protected";

export interface MisconfigMeasures {
  noncompliant_ratio: number;
  impact: number;
  patch_delay: number;
  criticality: number;
  neighborhood: number;
  local_score: number;
}

export interface SnapshotRecord {
  scope: ScopeKind;
  id: string | null;
  time: number;
  controls: number;
  misconfig: number;
  surface: number;
  composite: number;
  surface_by_category: Record<string, number> | null;
  measures: MisconfigMeasures | null;
}

// intents as embedded in /state (plain documents, optional keys omitted)
export interface IntentDocument {
  id: string;
  scope: ScopeKind;
  scope_id?: string;
  threshold: number;
  parent?: string;
}

// intents as returned by /intents (explicit nulls)
export interface IntentRecord {
  id: string;
  scope: ScopeKind;
  scope_id: string | null;
  threshold: number;
  parent: string | null;
}

export interface StateResponse {
  clock: number;
  scan_count: number;
  digest: string;
  network: SnapshotRecord;
  domains: Record<string, SnapshotRecord>;
  nfs: Record<string, SnapshotRecord>;
  states: Record<string, LifecycleState>;
  intents: IntentDocument[];
  at: number | null;
}

export interface TransitionRecord {
  time: number;
  from: LifecycleState;
  trigger: string;
  to: LifecycleState;
  event_id: number | null;
}

export interface FsmRecord {
  nf: string;
  current: LifecycleState;
  history: TransitionRecord[];
}

export interface FsmTable {
  initial: LifecycleState;
  states: LifecycleState[];
  triggers: string[];
  edges: { from: LifecycleState; trigger: string; to: LifecycleState }[];
  default: string;
}

export interface ReportRecord {
  seq: number;
  intent: string;
  scope: ScopeKind;
  id?: string | null;
  time: number;
  threshold: number;
  observed: number;
  shortfall: number;
  contributions: Record<string, number>;
  top_contributor: string;
}

export interface EventDocument {
  id: number;
  time: number;
  kind: string;
  nf?: string;
  [key: string]: unknown;
}

export interface EventAccepted {
  event: EventDocument;
  clock: number;
}

export interface ScenarioInfo {
  name: string;
  clock: number;
  digest: string;
  domains: number;
  nfs: number;
  scheduled_events: number;
  intents: number;
}

export interface ScenarioDetail {
  name: string;
  horizon: number | null;
  config: Record<string, unknown>;
  document: {
    network_functions?: { id: string; domain: string }[];
    [key: string]: unknown;
  };
}

export interface StepResult {
  kind: "event" | "tick";
  time: number;
  event_id: number | null;
}

export interface StepResponse {
  results: StepResult[];
  clock: number;
  digest: string;
}

export interface RunResponse {
  until: number;
  events: number;
  ticks: number;
  clock: number;
  digest: string;
}

export interface ReportsResponse {
  cursor: number;
  reports: ReportRecord[];
}

export interface HealthResponse {
  status: string;
  loaded: boolean;
  version: string;
}

export interface PendingResponse {
  clock: number;
  events: EventDocument[];
}
