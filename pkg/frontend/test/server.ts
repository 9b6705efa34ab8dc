import { spawn, type ChildProcess } from "node:child_process";
import path from "node:path";
import { fileURLToPath } from "node:url";

const HERE = path.dirname(fileURLToPath(import.meta.url));
export const REPO_ROOT = path.resolve(HERE, "..", "..");
export const DEMO_SCENARIO_PATH = path.join(
  REPO_ROOT,
  "src",
  "secstate",
  "scenarios",
  "intent_loop_demo.json",
);

export interface RunningService {
  baseUrl: string;
  stop(): Promise<void>;
}

async function waitForHealth(baseUrl: string, child: ChildProcess): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    if (child.exitCode !== null) throw new Error(`service exited with ${child.exitCode}`);
    try {
      const resp = await fetch(`${baseUrl}/health`);
      if (resp.ok) return;
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("service did not become healthy in time");
}

/** Spawn the real python service on a random port and wait until it answers. */
export async function startService(): Promise<RunningService> {
  let lastError: unknown = null;
  for (let attempt = 0; attempt < 3; attempt++) {
    const port = 21000 + Math.floor(Math.random() * 20000);
    const child = spawn(
      "python3",
      [
        "-m",
        "uvicorn",
        "--factory",
        "secstate.service.app:create_app",
        "--host",
        "127.0.0.1",
        "--port",
        String(port),
        "--log-level",
        "warning",
      ],
      { cwd: REPO_ROOT, stdio: ["ignore", "inherit", "inherit"] },
    );
    const baseUrl = `http://127.0.0.1:${port}`;
    try {
      await waitForHealth(baseUrl, child);
    } catch (err) {
      lastError = err;
      child.kill("SIGKILL");
      continue;
    }
    return {
      baseUrl,
      stop: () =>
        new Promise<void>((resolve) => {
          child.once("exit", () => resolve());
          child.kill("SIGTERM");
          setTimeout(() => child.kill("SIGKILL"), 3000).unref();
        }),
    };
  }
  throw lastError ?? new Error("could not start service");
}
