import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // round-trip tests spawn the real python service
    testTimeout: 60_000,
    hookTimeout: 60_000,
    fileParallelism: false,
  },
});
