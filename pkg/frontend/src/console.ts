import { ApiError, SecstateClient } from "./client.js";
import { renderScreen } from "./render.js";
import {
  applyIntents,
  applyReports,
  applyState,
  emptyView,
  membershipFromScenario,
  validThreshold,
  withStatus,
  type ConsoleView,
  type Membership,
} from "./view.js";

export interface ConsoleOptions {
  client: SecstateClient;
  write?: (text: string) => void;
  pollMs?: number;
}

const HELP = `commands:
  intent <id> <network|domain|nf> <threshold> [scope_id]   set a score floor
  retarget <id> <threshold>                                adjust a floor
  drop <id>                                                remove an intent
  apply-control <nf> <requirement> <control>               remediation event
  patch-rule <nf> <rule>                                   set a rule compliant
  inject <json>                                            raw event document
  step [count] | run [until]                               advance the clock
  refresh | help | quit`;

/**
 * Single rendering loop over a polled view model.  All reads and writes go
 * through the HTTP client; the view only ever holds service records.
 */
export class ConsoleApp {
  readonly client: SecstateClient;
  view: ConsoleView = emptyView();
  private membership: Membership | null = null;
  private readonly write: (text: string) => void;
  private readonly pollMs: number;
  private timer: ReturnType<typeof setInterval> | null = null;
  private inflight: AbortController | null = null;

  constructor(opts: ConsoleOptions) {
    this.client = opts.client;
    this.write = opts.write ?? ((text) => process.stdout.write(text));
    this.pollMs = opts.pollMs ?? 1000;
  }

  /** One poll cycle: state, intents with children, new reports. */
  async pollOnce(): Promise<void> {
    this.inflight?.abort();
    const ctl = new AbortController();
    this.inflight = ctl;
    const opts = { signal: ctl.signal };
    try {
      if (this.membership === null) {
        this.membership = membershipFromScenario(await this.client.scenario(opts));
      }
      const state = await this.client.state(undefined, opts);
      const intents = await this.client.listIntents(true, opts);
      const feed = await this.client.reports(this.view.lastSeq, opts);
      let next = applyState(this.view, state, this.membership);
      next = applyIntents(next, intents.intents);
      next = applyReports(next, feed.reports);
      this.view = next;
    } finally {
      if (this.inflight === ctl) this.inflight = null;
    }
  }

  render(): string {
    return renderScreen(this.view);
  }

  async refresh(): Promise<void> {
    try {
      await this.pollOnce();
    } catch (err) {
      if (err instanceof Error && err.name === "AbortError") return;
      this.view = withStatus(this.view, `error: ${message(err)}`);
    }
    this.write(this.render());
  }

  start(): void {
    void this.refresh();
    this.timer = setInterval(() => void this.refresh(), this.pollMs);
  }

  stop(): void {
    if (this.timer) clearInterval(this.timer);
    this.timer = null;
    this.inflight?.abort();
  }

  async submitIntent(id: string, scope: string, threshold: number, scopeId?: string): Promise<void> {
    if (!validThreshold(threshold)) {
      this.view = withStatus(this.view, `rejected: threshold ${threshold} must lie in [0, 1]`);
      return;
    }
    const body: { id: string; scope: string; threshold: number; scope_id?: string } = {
      id,
      scope,
      threshold,
    };
    if (scopeId !== undefined) body.scope_id = scopeId;
    await this.client.submitIntent(body);
    await this.pollOnce();
    this.view = withStatus(this.view, `intent ${id} registered`);
  }

  async applyControl(nf: string, requirement: string, control: string): Promise<void> {
    await this.client.injectEvent({ kind: "ControlApplied", nf, requirement, control });
    this.view = withStatus(this.view, `queued ControlApplied for ${nf}`);
  }

  async patchRule(nf: string, rule: string): Promise<void> {
    await this.client.injectEvent({
      kind: "ConfigChanged",
      nf,
      rule,
      noncompliant_attributes: 0,
    });
    this.view = withStatus(this.view, `queued patch for ${nf}/${rule}`);
  }

  async handleLine(line: string): Promise<boolean> {
    const parts = line.trim().split(/\s+/).filter((p) => p.length > 0);
    if (parts.length === 0) return true;
    const [command, ...args] = parts;
    try {
      switch (command) {
        case "help":
          this.write(HELP + "\n");
          return true;
        case "quit":
        case "exit":
          return false;
        case "refresh":
          break;
        case "intent":
          await this.submitIntent(args[0], args[1], Number(args[2]), args[3]);
          break;
        case "retarget":
          await this.client.updateIntent(args[0], Number(args[1]));
          break;
        case "drop":
          await this.client.removeIntent(args[0]);
          break;
        case "apply-control":
          await this.applyControl(args[0], args[1], args[2]);
          break;
        case "patch-rule":
          await this.patchRule(args[0], args[1]);
          break;
        case "inject":
          await this.client.injectEvent(JSON.parse(args.join(" ")) as Record<string, unknown>);
          break;
        case "step":
          await this.client.step(args.length > 0 ? Number(args[0]) : 1);
          break;
        case "run":
          await this.client.run(args.length > 0 ? Number(args[0]) : undefined);
          break;
        default:
          this.view = withStatus(this.view, `unknown command: ${command} (try help)`);
      }
    } catch (err) {
      this.view = withStatus(this.view, `error: ${message(err)}`);
    }
    await this.refresh();
    return true;
  }
}

function message(err: unknown): string {
  if (err instanceof ApiError) return err.detail;
  if (err instanceof Error) return err.message;
  return String(err);
}
