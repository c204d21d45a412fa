import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['tests/**/*.test.ts'],
    // the live-server test runs a paced simulation, so give it headroom
    testTimeout: 60000,
    hookTimeout: 60000,
  },
});
