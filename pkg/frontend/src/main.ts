#!/usr/bin/env node
import readline from "node:readline";

import { SecstateClient } from "./client.js";
import { ConsoleApp } from "./console.js";

function baseUrl(): string {
  const flag = process.argv.indexOf("--url");
  if (flag !== -1 && process.argv[flag + 1]) return process.argv[flag + 1];
  return process.env.SECSTATE_CONSOLE_URL ?? "http://127.0.0.1:8000";
}

const app = new ConsoleApp({ client: new SecstateClient(baseUrl()) });
const rl = readline.createInterface({ input: process.stdin, output: process.stdout });

app.start();
rl.on("line", (line) => {
  void app.handleLine(line).then((keepGoing) => {
    if (!keepGoing) {
      app.stop();
      rl.close();
    }
  });
});
rl.on("close", () => {
  app.stop();
  process.exit(0);
});
