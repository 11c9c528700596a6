// JSON contracts of the analytics API. The dashboard performs no analytics:
// every number on screen comes from one of these payload fields.

export interface Meta {
  build_id: number;
  built_at: string;
  first_date: string;
  last_date: string;
  k: number;
  city_count: number;
  has_boundaries: boolean;
}

export interface CityInfo {
  name: string;
  lat: number;
  lon: number;
  has_cases: boolean;
  first_case_date?: string;
}

export interface WindowRef {
  a: string;
  b: string;
}

export interface NeighborhoodPayload {
  k: number;
  city: string;
  as_of: string;
  members: string[];
  active: string[];
}

export interface CurvePoint {
  date: string;
  value: number;
}

export interface CurvesPayload {
  city: string;
  window: WindowRef;
  members: string[];
  curves: {
    neighborhood_total: CurvePoint[];
    city_total: CurvePoint[];
    neighborhood_window: CurvePoint[];
    city_window: CurvePoint[];
  };
  totals: { city: number; neighborhood: number };
  city_dominates: boolean;
}

export interface GlyphEntry {
  city: string;
  saturation: number;
  window_total: number;
}

export type RiskMode = "unit_square" | "raw";

export interface GlyphPayload {
  focus: GlyphEntry;
  segments: GlyphEntry[];
  window: WindowRef;
  mode: string;
}

export interface IsolationPayload {
  city: string;
  mean: number;
  std: number;
  sample_count: number;
  display: string;
}

export interface MapFeature {
  type: "Feature";
  properties: { name: string; focus?: boolean; neighbor?: boolean };
  geometry: { type: string; coordinates: number[][][] };
}

export interface MapPayload {
  type: "FeatureCollection";
  features: MapFeature[];
}
