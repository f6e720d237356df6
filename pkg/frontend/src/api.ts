/** Typed client for the model service, one in-flight request per view. */

import type {
  CompleteRequest,
  CompleteResponse,
  GenerateRequest,
  GenerateResponse,
  ModelInfo,
  SweepRequest,
  SweepResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly kind: string,
    readonly detail: unknown,
  ) {
    super(`${kind} (HTTP ${status})`);
  }

  /** One-line rendering of validation details for inline display. */
  describe(): string {
    if (typeof this.detail === "string") return this.detail;
    if (Array.isArray(this.detail)) {
      return this.detail
        .map((d) => (d && typeof d === "object" ? `${d.field}: ${d.message}` : String(d)))
        .join("; ");
    }
    return this.message;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  modelInfo(signal?: AbortSignal): Promise<ModelInfo> {
    return this.request("GET", "/model/info", undefined, signal);
  }

  generate(body: GenerateRequest, signal?: AbortSignal): Promise<GenerateResponse> {
    return this.request("POST", "/generate", body, signal);
  }

  complete(body: CompleteRequest, signal?: AbortSignal): Promise<CompleteResponse> {
    return this.request("POST", "/complete", body, signal);
  }

  sweep(body: SweepRequest, signal?: AbortSignal): Promise<SweepResponse> {
    return this.request("POST", "/sweep", body, signal);
  }

  private async request<T>(
    method: string,
    path: string,
    body: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
      signal,
    });
    if (!response.ok) {
      let kind = `http_${response.status}`;
      let detail: unknown = null;
      try {
        const parsed = await response.json();
        kind = typeof parsed.error === "string" ? parsed.error : kind;
        detail = parsed.detail ?? null;
      } catch {
        // non-JSON error body, keep the status-based kind
      }
      throw new ApiError(response.status, kind, detail);
    }
    return (await response.json()) as T;
  }
}

/** Holds at most one live request; starting a new one aborts the old. */
export class RequestSlot {
  private controller: AbortController | null = null;

  async run<T>(task: (signal: AbortSignal) => Promise<T>): Promise<T> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      return await task(controller.signal);
    } finally {
      if (this.controller === controller) this.controller = null;
    }
  }

  abort(): void {
    this.controller?.abort();
    this.controller = null;
  }
}

export function isAbort(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}
