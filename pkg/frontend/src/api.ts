/** Typed client for the service's JSON endpoints.
 *
 * The fetch implementation is injectable so tests can drive the client
 * with canned responses; the UI never computes analytics locally.
 */
import type {
  CentralityPayload,
  ErrorBody,
  GraphPayload,
  HealthPayload,
  PathPayload,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** A non-2xx response; carries the service's {code, message, detail} body. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ErrorBody,
  ) {
    super(body.message);
    this.name = "ApiError";
  }
}

function buildUrl(base: string, path: string, params?: Record<string, string>): string {
  const query = params ? new URLSearchParams(params).toString() : "";
  return base + path + (query ? `?${query}` : "");
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;

  constructor(
    private readonly baseUrl: string = "",
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async get<T>(
    path: string,
    params?: Record<string, string>,
    signal?: AbortSignal,
  ): Promise<T> {
    const response = await this.fetchImpl(buildUrl(this.baseUrl, path, params), { signal });
    if (!response.ok) {
      let body: ErrorBody;
      try {
        body = (await response.json()) as ErrorBody;
      } catch {
        body = { code: "http_error", message: `HTTP ${response.status}`, detail: null };
      }
      throw new ApiError(response.status, body);
    }
    return (await response.json()) as T;
  }

  health(signal?: AbortSignal): Promise<HealthPayload> {
    return this.get("/api/health", undefined, signal);
  }

  graph(limit = 500, offset = 0, signal?: AbortSignal): Promise<GraphPayload> {
    return this.get("/api/graph", { limit: String(limit), offset: String(offset) }, signal);
  }

  path(
    source: string,
    target: string,
    directed = false,
    signal?: AbortSignal,
  ): Promise<PathPayload> {
    return this.get(
      "/api/graph/path",
      { source, target, directed: String(directed) },
      signal,
    );
  }

  centrality(top?: number, signal?: AbortSignal): Promise<CentralityPayload> {
    const params: Record<string, string> = {};
    if (top !== undefined) params.top = String(top);
    return this.get("/api/graph/centrality", params, signal);
  }

  query(relation: string, signal?: AbortSignal): Promise<GraphPayload> {
    return this.get("/api/graph/query", { relation }, signal);
  }
}
