/**
 * Typed fetch client. One method per endpoint, no interpretation: the
 * service renders all dialogue text, the client only transports it.
 */

import type {
  ApiErrorDetail,
  CommandResult,
  PathRow,
  RegionsPayload,
  SessionCreated,
  SessionState,
  SolveData,
  TranscriptEntry,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: ApiErrorDetail,
  ) {
    super(detail.error ?? `request failed with ${status}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = await res.json();
  if (!res.ok) {
    const detail =
      body && typeof body === "object" && "detail" in body
        ? (body.detail as ApiErrorDetail)
        : { error: JSON.stringify(body) };
    throw new ApiError(res.status, detail);
  }
  return body as T;
}

export interface SolveOptions {
  minimize?: string;
  project?: string[];
  verbose?: 0 | 1 | 2;
  expectedVersion?: number;
}

export class ApiClient {
  constructor(public readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  createSessionFromTree(tree: unknown): Promise<SessionCreated> {
    return request(this.url("/sessions"), {
      method: "POST",
      body: JSON.stringify({ tree }),
    });
  }

  createSessionFromCsv(
    csv: string,
    label: string,
    maxDepth?: number,
  ): Promise<SessionCreated> {
    return request(this.url("/sessions"), {
      method: "POST",
      body: JSON.stringify({ csv, label, max_depth: maxDepth ?? null }),
    });
  }

  getSession(id: string): Promise<SessionState> {
    return request(this.url(`/sessions/${id}`));
  }

  declareInstance(
    id: string,
    name: string,
    values: Record<string, string>,
    label?: string,
    minconf?: string,
    expectedVersion?: number,
  ): Promise<CommandResult> {
    return request(this.url(`/sessions/${id}/instances`), {
      method: "POST",
      body: JSON.stringify({
        name,
        values,
        label: label ?? null,
        minconf: minconf ?? null,
        expected_version: expectedVersion ?? null,
      }),
    });
  }

  addConstraint(
    id: string,
    text: string,
    expectedVersion?: number,
  ): Promise<CommandResult> {
    return request(this.url(`/sessions/${id}/constraints`), {
      method: "POST",
      body: JSON.stringify({ text, expected_version: expectedVersion ?? null }),
    });
  }

  retract(
    id: string,
    key: string,
    expectedVersion?: number,
  ): Promise<CommandResult> {
    return request(this.url(`/sessions/${id}/retract`), {
      method: "POST",
      body: JSON.stringify({ key, expected_version: expectedVersion ?? null }),
    });
  }

  solveOpt(id: string, options: SolveOptions = {}): Promise<SolveData> {
    return request(this.url(`/sessions/${id}/solveopt`), {
      method: "POST",
      body: JSON.stringify({
        minimize: options.minimize ?? null,
        project: options.project ?? null,
        verbose: options.verbose ?? 1,
        expected_version: options.expectedVersion ?? null,
      }),
    });
  }

  paths(id: string): Promise<{ paths: PathRow[] }> {
    return request(this.url(`/sessions/${id}/paths`));
  }

  transcript(id: string): Promise<{ commands: TranscriptEntry[] }> {
    return request(this.url(`/sessions/${id}/transcript`));
  }

  parse(id: string, text: string): Promise<{ atoms: string[] }> {
    return request(this.url(`/sessions/${id}/parse`), {
      method: "POST",
      body: JSON.stringify({ text }),
    });
  }

  regions(id: string, instance: string): Promise<RegionsPayload> {
    return request(this.url(`/sessions/${id}/regions/${instance}`));
  }
}
