import { readFileSync } from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

const FIXTURES = path.join(path.dirname(fileURLToPath(import.meta.url)), "fixtures");

/** Load a JSON fixture captured from the live service. */
export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(path.join(FIXTURES, name), "utf8")) as T;
}

/** Load a fixture as raw text (for the SSE stream capture). */
export function loadFixtureText(name: string): string {
  return readFileSync(path.join(FIXTURES, name), "utf8");
}
