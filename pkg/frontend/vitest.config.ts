import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // suites that talk to a live service spawn it in beforeAll
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
