import type {
  EventAccepted,
  FsmRecord,
  FsmTable,
  HealthResponse,
  IntentRecord,
  PendingResponse,
  ReportsResponse,
  RunResponse,
  ScenarioDetail,
  ScenarioInfo,
  StateResponse,
  StepResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
    readonly errorType?: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export interface RequestOptions {
  signal?: AbortSignal;
}

/** Thin fetch wrapper around the service API.  All mutations go through here. */
export class SecstateClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    opts?: RequestOptions,
  ): Promise<T> {
    const init: RequestInit = { method, signal: opts?.signal ?? null };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await fetch(this.baseUrl + path, init);
    const text = await resp.text();
    if (!resp.ok) {
      let detail = text;
      let errorType: string | undefined;
      try {
        const parsed = JSON.parse(text) as { detail?: unknown; error?: string };
        if (parsed.detail !== undefined) detail = JSON.stringify(parsed.detail).replace(/^"|"$/g, "");
        errorType = parsed.error;
      } catch {
        // non-JSON error body, keep raw text
      }
      throw new ApiError(resp.status, detail, errorType);
    }
    return JSON.parse(text) as T;
  }

  health(opts?: RequestOptions): Promise<HealthResponse> {
    return this.request("GET", "/health", undefined, opts);
  }

  loadScenario(
    source: { document?: unknown; path?: string; log_path?: string },
    opts?: RequestOptions,
  ): Promise<ScenarioInfo> {
    return this.request("POST", "/scenario", source, opts);
  }

  scenario(opts?: RequestOptions): Promise<ScenarioDetail> {
    return this.request("GET", "/scenario", undefined, opts);
  }

  state(at?: number, opts?: RequestOptions): Promise<StateResponse> {
    const suffix = at === undefined ? "" : `?at=${at}`;
    return this.request("GET", `/state${suffix}`, undefined, opts);
  }

  fsm(nfId: string, opts?: RequestOptions): Promise<FsmRecord> {
    return this.request("GET", `/fsm/${encodeURIComponent(nfId)}`, undefined, opts);
  }

  fsmTable(opts?: RequestOptions): Promise<FsmTable> {
    return this.request("GET", "/fsm/table", undefined, opts);
  }

  injectEvent(doc: Record<string, unknown>, opts?: RequestOptions): Promise<EventAccepted> {
    return this.request("POST", "/events", doc, opts);
  }

  pendingEvents(opts?: RequestOptions): Promise<PendingResponse> {
    return this.request("GET", "/events/pending", undefined, opts);
  }

  submitIntent(
    intent: { id: string; scope: string; scope_id?: string; threshold: number },
    opts?: RequestOptions,
  ): Promise<IntentRecord> {
    return this.request("POST", "/intents", intent, opts);
  }

  listIntents(children: boolean, opts?: RequestOptions): Promise<{ intents: IntentRecord[] }> {
    return this.request("GET", `/intents?children=${children}`, undefined, opts);
  }

  updateIntent(id: string, threshold: number, opts?: RequestOptions): Promise<IntentRecord> {
    return this.request("PATCH", `/intents/${encodeURIComponent(id)}`, { threshold }, opts);
  }

  removeIntent(id: string, opts?: RequestOptions): Promise<{ removed: string }> {
    return this.request("DELETE", `/intents/${encodeURIComponent(id)}`, undefined, opts);
  }

  reports(since: number, opts?: RequestOptions): Promise<ReportsResponse> {
    return this.request("GET", `/reports?since=${since}`, undefined, opts);
  }

  step(count: number, opts?: RequestOptions): Promise<StepResponse> {
    return this.request("POST", "/sim/step", { count }, opts);
  }

  run(until?: number, opts?: RequestOptions): Promise<RunResponse> {
    return this.request("POST", "/sim/run", until === undefined ? {} : { until }, opts);
  }
}
