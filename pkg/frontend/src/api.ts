import type {
  CityInfo,
  CurvesPayload,
  GlyphPayload,
  IsolationPayload,
  MapPayload,
  Meta,
  NeighborhoodPayload,
  RiskMode,
} from "./types.js";

export interface ApiResponse<T> {
  data: T;
  buildId: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

/** The per-panel surface the dashboard consumes. */
export interface DashboardApi {
  neighborhood(city: string, asOf: string): Promise<ApiResponse<NeighborhoodPayload>>;
  curves(city: string, a: string, b: string): Promise<ApiResponse<CurvesPayload>>;
  glyph(city: string, a: string, b: string, mode: RiskMode): Promise<ApiResponse<GlyphPayload>>;
  isolation(city: string, a: string, b: string): Promise<ApiResponse<IsolationPayload | null>>;
  map(city?: string): Promise<ApiResponse<MapPayload>>;
}

/** Thin typed client; every response carries the X-Build-Id it was served from. */
export class ApiClient implements DashboardApi {
  constructor(
    private readonly base = "",
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async get<T>(path: string, params?: Record<string, string>): Promise<ApiResponse<T>> {
    const query = params ? "?" + new URLSearchParams(params).toString() : "";
    const resp = await this.fetchFn(`${this.base}${path}${query}`);
    const buildId = Number(resp.headers.get("x-build-id") ?? 0);
    if (resp.status === 204) {
      return { data: null as T, buildId };
    }
    if (!resp.ok) {
      const body = await resp.json().catch(() => ({ error: "unknown", detail: "" }));
      throw new ApiError(resp.status, body.error ?? "unknown", body.detail ?? "");
    }
    return { data: (await resp.json()) as T, buildId };
  }

  meta(): Promise<ApiResponse<Meta>> {
    return this.get("/api/meta");
  }

  cities(): Promise<ApiResponse<CityInfo[]>> {
    return this.get("/api/cities");
  }

  neighborhood(city: string, asOf: string): Promise<ApiResponse<NeighborhoodPayload>> {
    return this.get(`/api/neighborhood/${encodeURIComponent(city)}`, { as_of: asOf });
  }

  curves(city: string, a: string, b: string): Promise<ApiResponse<CurvesPayload>> {
    return this.get(`/api/curves/${encodeURIComponent(city)}`, { a, b });
  }

  glyph(city: string, a: string, b: string, mode: RiskMode): Promise<ApiResponse<GlyphPayload>> {
    return this.get(`/api/glyph/${encodeURIComponent(city)}`, { a, b, mode });
  }

  isolation(city: string, a: string, b: string): Promise<ApiResponse<IsolationPayload | null>> {
    return this.get(`/api/isolation/${encodeURIComponent(city)}`, { a, b });
  }

  map(city?: string): Promise<ApiResponse<MapPayload>> {
    return this.get("/api/map", city ? { city } : undefined);
  }
}
