/**
 * Spawns the real HTTP service for integration suites. Each suite gets
 * its own port so vitest can run files in parallel.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { setTimeout as sleep } from "node:timers/promises";
import { fileURLToPath } from "node:url";

export const REPO_ROOT = fileURLToPath(new URL("../..", import.meta.url));

export interface LiveServer {
  baseUrl: string;
  stop(): Promise<void>;
}

export async function startServer(port: number): Promise<LiveServer> {
  const child: ChildProcess = spawn(
    "python3",
    [
      "-m",
      "uvicorn",
      "contrex.server:app",
      "--host",
      "127.0.0.1",
      "--port",
      String(port),
      "--log-level",
      "warning",
    ],
    { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
  );
  let stderr = "";
  child.stderr?.on("data", (chunk: Buffer) => {
    stderr += chunk.toString();
  });

  const baseUrl = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 60_000;
  for (;;) {
    if (child.exitCode !== null) {
      throw new Error(`service exited with ${child.exitCode}:\n${stderr}`);
    }
    try {
      const res = await fetch(`${baseUrl}/openapi.json`);
      if (res.ok) {
        break;
      }
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      child.kill("SIGKILL");
      throw new Error(`service did not come up on :${port}\n${stderr}`);
    }
    await sleep(150);
  }

  return {
    baseUrl,
    async stop() {
      child.kill("SIGTERM");
      const gone = new Promise<void>((resolve) => child.once("exit", () => resolve()));
      await Promise.race([gone, sleep(5_000)]);
      if (child.exitCode === null) {
        child.kill("SIGKILL");
      }
    },
  };
}
