import type { AnalyzeResponse, MeterEntry, QasidaClient } from "./types.js";

/** A non-2xx service reply, carrying the structured error payload. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly type: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the /v1 endpoints — the UI's only I/O. */
export class HttpClient implements QasidaClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async meters(): Promise<MeterEntry[]> {
    return this.request<MeterEntry[]>("/v1/meters", { method: "GET" });
  }

  async analyze(text: string, meterHint: number | null): Promise<AnalyzeResponse> {
    const body: { text: string; meter_hint?: number } = { text };
    if (meterHint !== null) {
      body.meter_hint = meterHint;
    }
    return this.request<AnalyzeResponse>("/v1/analyze", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  private async request<T>(path: string, init: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (response.ok) {
      return (await response.json()) as T;
    }
    let type = "HttpError";
    let message = `${response.status} ${response.statusText}`;
    try {
      const payload = (await response.json()) as {
        error?: { type?: string; message?: string };
      };
      if (payload.error) {
        type = payload.error.type ?? type;
        message = payload.error.message ?? message;
      }
    } catch {
      // keep the generic message when the body is not JSON
    }
    throw new ApiError(response.status, type, message);
  }
}
