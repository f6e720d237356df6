import { defineConfig } from "vitest/config";

// Dev server proxies API routes to a locally running `cheart serve`.
const API = "http://127.0.0.1:8000";

export default defineConfig({
  server: {
    proxy: {
      "/model": API,
      "/generate": API,
      "/complete": API,
      "/sweep": API,
    },
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
  },
});
