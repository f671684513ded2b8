/**
 * Thin typed client for the readme service.  The fetch implementation is
 * injected so tests can run against a scripted transport.
 */

import { FileItem, WorkspaceUpload, encodeUpload } from "./core.js";

export interface HealthResponse {
  status: string;
  model_version: number;
}

export interface Candidate {
  path: string;
  score: number;
}

export interface IdentifyResponse {
  candidates: Candidate[];
}

export interface GenerateResponse {
  readme: string;
  representative_path: string;
  prompt_tokens: number;
  truncated: boolean;
}

export interface ErrorBody {
  error: string;
  code: string;
}

/** The transport surface we need; compatible with global fetch. */
export type FetchLike = (
  url: string,
  init: { method: string; headers: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; text(): Promise<string> }>;

/** The service answered with a non-2xx status. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody,
  ) {
    super(`service returned ${status} (${body.code}): ${body.error}`);
    this.name = "ServiceError";
  }
}

/** The service could not be reached at all. */
export class ServiceUnreachable extends Error {
  constructor(
    readonly endpoint: string,
    cause: unknown,
  ) {
    super(`cannot reach readme service at ${endpoint}: ${String(cause)}`);
    this.name = "ServiceUnreachable";
  }
}

function parseErrorBody(status: number, text: string): ErrorBody {
  try {
    const parsed = JSON.parse(text) as Partial<ErrorBody>;
    if (typeof parsed.error === "string" && typeof parsed.code === "string") {
      return { error: parsed.error, code: parsed.code };
    }
  } catch {
    // fall through to the generic body below
  }
  return { error: text.slice(0, 500) || `HTTP ${status}`, code: "UNKNOWN" };
}

export class LarchClient {
  private readonly base: string;

  constructor(
    endpoint: string,
    private readonly fetchImpl: FetchLike,
  ) {
    this.base = endpoint.replace(/\/+$/, "");
  }

  get endpoint(): string {
    return this.base;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: string,
  ): Promise<T> {
    let response;
    try {
      response = await this.fetchImpl(`${this.base}${path}`, {
        method,
        headers: { "Content-Type": "application/json" },
        ...(body === undefined ? {} : { body }),
      });
    } catch (err) {
      throw new ServiceUnreachable(this.base, err);
    }
    const text = await response.text();
    if (!response.ok) {
      throw new ServiceError(response.status, parseErrorBody(response.status, text));
    }
    return JSON.parse(text) as T;
  }

  health(): Promise<HealthResponse> {
    return this.request<HealthResponse>("GET", "/health");
  }

  identify(files: FileItem[]): Promise<IdentifyResponse> {
    return this.request<IdentifyResponse>(
      "POST",
      "/api/v1/identify",
      JSON.stringify({ files }),
    );
  }

  generate(upload: WorkspaceUpload): Promise<GenerateResponse> {
    return this.request<GenerateResponse>(
      "POST",
      "/api/v1/generate",
      encodeUpload(upload),
    );
  }
}
