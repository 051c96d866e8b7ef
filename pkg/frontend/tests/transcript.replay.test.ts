/**
 * Replays the credit dialogue through the typed HTTP endpoints, the same
 * way the page does, and checks the rendered transcript equals the CLI
 * golden transcript byte for byte.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, expect, test } from "vitest";

import { ApiClient } from "../src/api.js";
import { transcriptText } from "../src/transcript.js";
import type { TranscriptEntry } from "../src/types.js";
import { REPO_ROOT, startServer, type LiveServer } from "./server.js";

const TREE = JSON.parse(
  readFileSync(join(REPO_ROOT, "data", "credit_tree.json"), "utf8"),
);
const SCRIPT = readFileSync(join(REPO_ROOT, "data", "credit.rx"), "utf8");
const GOLDEN = readFileSync(join(REPO_ROOT, "data", "credit_golden.txt"), "utf8");

let server: LiveServer;

beforeAll(async () => {
  server = await startServer(18741);
});

afterAll(async () => {
  await server.stop();
});

interface Replayed {
  lines: string[];
  version: number;
}

/** Route one dialogue command through the endpoint the UI would use. */
async function replay(
  client: ApiClient,
  sid: string,
  command: string,
  version: number,
): Promise<Replayed> {
  const [head, ...tokens] = command.split(/\s+/);
  const rest = command.slice(command.indexOf(" ") + 1).trim();
  switch (head) {
    case "instance": {
      const name = tokens[0]!;
      const values: Record<string, string> = {};
      let label: string | undefined;
      let minconf: string | undefined;
      for (const token of tokens.slice(1)) {
        const split = token.indexOf("=");
        const key = token.slice(0, split);
        const value = token.slice(split + 1);
        if (key === "label") {
          label = value;
        } else if (key === "minconf") {
          minconf = value;
        } else {
          values[key] = value;
        }
      }
      return client.declareInstance(sid, name, values, label, minconf, version);
    }
    case "constraint":
      return client.addConstraint(sid, rest, version);
    case "retract":
      return client.retract(sid, rest, version);
    case "solveopt": {
      let minimize: string | undefined;
      let project: string[] | undefined;
      let verbose: 0 | 1 | 2 = 1;
      for (const token of tokens) {
        const split = token.indexOf("=");
        const key = token.slice(0, split);
        const value = token.slice(split + 1);
        if (key === "minimize") {
          minimize = value;
        } else if (key === "project") {
          project = value.split(",");
        } else if (key === "verbose") {
          verbose = Number(value) as 0 | 1 | 2;
        }
      }
      return client.solveOpt(sid, {
        minimize,
        project,
        verbose,
        expectedVersion: version,
      });
    }
    default:
      throw new Error(`unexpected command: ${command}`);
  }
}

test("credit dialogue over HTTP renders the CLI golden transcript", async () => {
  const client = new ApiClient(server.baseUrl);
  const created = await client.createSessionFromTree(TREE);
  let version = created.version;

  const entries: TranscriptEntry[] = [];
  for (const raw of SCRIPT.split("\n")) {
    const command = raw.trim();
    if (!command) {
      continue;
    }
    if (command.startsWith("#")) {
      // the CLI echoes comments and produces no output
      entries.push({ command, output: [] });
      continue;
    }
    const result = await replay(client, created.session_id, command, version);
    expect(result.version).toBeGreaterThanOrEqual(version);
    version = result.version;
    entries.push({ command, output: result.lines });
  }

  expect(transcriptText(entries)).toBe(GOLDEN);

  // the service's own transcript holds the same dialogue, sans comments
  const mirror = await client.transcript(created.session_id);
  expect(mirror.commands).toEqual(entries.filter((e) => !e.command.startsWith("#")));

  // final session state reflects the retract near the end of the script
  const state = await client.getSession(created.session_id);
  expect(state.version).toBe(version);
  expect(state.instances.map((i) => i.name)).toEqual(["F", "CE"]);
  const sources = state.constraints.map((c) => c.source);
  expect(sources).not.toContain("F.age=19.0");
  expect(sources).toContain("F.age<=19.0");
});
