import { defineConfig } from "vitest/config";

// Source files import each other with explicit ".js" so the tsc output runs
// as browser ESM without a bundler; this alias lets vite-node resolve those
// specifiers back to the .ts sources during tests.
export default defineConfig({
  resolve: {
    alias: [{ find: /^(\.{1,2}\/.*)\.js$/, replacement: "$1" }],
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
  },
});
