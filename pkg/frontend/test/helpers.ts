// Shared test doubles: a programmable in-memory API and deferred promises.

import type { ApiResponse, DashboardApi } from "../src/api.js";
import type {
  CurvesPayload,
  GlyphPayload,
  IsolationPayload,
  MapPayload,
  Meta,
  NeighborhoodPayload,
  RiskMode,
} from "../src/types.js";

export const META: Meta = {
  build_id: 1,
  built_at: "2020-06-01T00:00:00+00:00",
  first_date: "2020-03-01",
  last_date: "2020-05-29",
  k: 10,
  city_count: 4,
  has_boundaries: true,
};

export function deferred<T>() {
  let resolve!: (value: T) => void;
  const promise = new Promise<T>((r) => (resolve = r));
  return { promise, resolve };
}

export function glyphPayload(city: string, a: string, b: string, mode: string,
                             segments = 3): GlyphPayload {
  return {
    focus: { city, saturation: 1.0, window_total: 40 },
    segments: Array.from({ length: segments }, (_, i) => ({
      city: `${city}-n${i}`,
      saturation: (segments - i) / (segments + 1),
      window_total: 10 * (segments - i),
    })),
    window: { a, b },
    mode,
  };
}

export function curvesPayload(city: string, a: string, b: string): CurvesPayload {
  const point = (d: string, v: number) => ({ date: d, value: v });
  return {
    city,
    window: { a, b },
    members: [`${city}-n0`, `${city}-n1`],
    curves: {
      neighborhood_total: [point(a, 5), point(b, 9)],
      city_total: [point(a, 11), point(b, 13)],
      neighborhood_window: [point(a, 1), point(b, 5)],
      city_window: [point(a, 2), point(b, 4)],
    },
    totals: { city: 4, neighborhood: 5 },
    city_dominates: false,
  };
}

export function neighborhoodPayload(city: string, asOf: string): NeighborhoodPayload {
  return {
    k: 10,
    city,
    as_of: asOf,
    members: [`${city}-n0`, `${city}-n1`, `${city}-n2`],
    active: [`${city}-n0`, `${city}-n1`],
  };
}

export function isolationPayload(city: string): IsolationPayload {
  return { city, mean: 0.47, std: 0.026, sample_count: 20, display: "47% ± 0.026" };
}

export function mapPayload(city?: string): MapPayload {
  const square = (name: string, x: number): MapPayload["features"][number] => ({
    type: "Feature",
    properties: city === undefined
      ? { name }
      : { name, focus: name === city, neighbor: name === `${city}-n0` },
    geometry: {
      type: "Polygon",
      coordinates: [[[x, 0], [x + 1, 0], [x + 1, 1], [x, 1], [x, 0]]],
    },
  });
  const names = city ? [city, `${city}-n0`, "other"] : ["other"];
  return { type: "FeatureCollection", features: names.map((n, i) => square(n, i * 2)) };
}

type PendingGate = { promise: Promise<void>; resolve: () => void } | null;

/** In-memory DashboardApi that records calls and can hold responses back. */
export class FakeApi implements DashboardApi {
  calls: string[] = [];
  buildId = 1;
  /** when set for a city, responses for that city wait on the gate */
  gates = new Map<string, Promise<void>>();

  private async respond<T>(key: string, city: string, data: T): Promise<ApiResponse<T>> {
    this.calls.push(key);
    const gate = this.gates.get(city);
    if (gate) await gate;
    return { data, buildId: this.buildId };
  }

  neighborhood(city: string, asOf: string) {
    return this.respond(`neighborhood:${city}:${asOf}`, city, neighborhoodPayload(city, asOf));
  }

  curves(city: string, a: string, b: string) {
    return this.respond(`curves:${city}:${a}:${b}`, city, curvesPayload(city, a, b));
  }

  glyph(city: string, a: string, b: string, mode: RiskMode) {
    return this.respond(`glyph:${city}:${a}:${b}:${mode}`, city,
                        glyphPayload(city, a, b, mode));
  }

  isolation(city: string, a: string, b: string) {
    return this.respond<IsolationPayload | null>(
      `isolation:${city}:${a}:${b}`, city, isolationPayload(city));
  }

  map(city?: string) {
    return this.respond(`map:${city ?? ""}`, city ?? "", mapPayload(city));
  }

  countCalls(prefix: string): number {
    return this.calls.filter((c) => c.startsWith(prefix)).length;
  }
}
