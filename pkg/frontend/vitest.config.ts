import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    globalSetup: "./tests/global-setup.ts",
    // one live service instance backs all test files
    fileParallelism: false,
    testTimeout: 30000,
    hookTimeout: 120000,
  },
});
