// Dashboard state and fetch orchestration.
//
// Stale-response rule: each panel keeps a monotonically increasing request
// token; a response is applied only when its token is still the panel's
// newest. Rapid interactions therefore always settle on the last one.

import type { DashboardApi } from "./api.js";
import type {
  CurvesPayload,
  GlyphPayload,
  IsolationPayload,
  MapPayload,
  Meta,
  NeighborhoodPayload,
  RiskMode,
  WindowRef,
} from "./types.js";

export type Panel = "neighborhood" | "curves" | "glyph" | "isolation" | "map";

export const PANELS: readonly Panel[] = ["neighborhood", "curves", "glyph", "isolation", "map"];

export interface ViewState {
  focusCity: string | null;
  window: WindowRef; // always valid (a <= b) and inside the snapshot range
  mode: RiskMode;
  hoveredSegment: string | null;
}

interface PanelSlot<T> {
  data: T | null;
  buildId: number | null;
}

export interface PanelsState {
  neighborhood: PanelSlot<NeighborhoodPayload>;
  curves: PanelSlot<CurvesPayload>;
  glyph: PanelSlot<GlyphPayload>;
  isolation: PanelSlot<IsolationPayload | null>;
  map: PanelSlot<MapPayload>;
}

function emptySlot<T>(): PanelSlot<T> {
  return { data: null, buildId: null };
}

export function clampWindow(a: string, b: string, meta: Meta): WindowRef {
  let lo = a < meta.first_date ? meta.first_date : a;
  let hi = b > meta.last_date ? meta.last_date : b;
  if (lo > meta.last_date) lo = meta.last_date;
  if (hi < meta.first_date) hi = meta.first_date;
  if (lo > hi) [lo, hi] = [hi, lo];
  return { a: lo, b: hi };
}

export function lastNDays(meta: Meta, n: number): WindowRef {
  const end = new Date(`${meta.last_date}T00:00:00Z`);
  const start = new Date(end.getTime() - (n - 1) * 86_400_000);
  return clampWindow(start.toISOString().slice(0, 10), meta.last_date, meta);
}

export class DashboardStore {
  readonly state: ViewState;
  readonly panels: PanelsState;
  private tokens: Record<Panel, number> = {
    neighborhood: 0,
    curves: 0,
    glyph: 0,
    isolation: 0,
    map: 0,
  };
  private listeners: Array<() => void> = [];

  constructor(
    private readonly api: DashboardApi,
    private readonly meta: Meta,
    windowDays = 20,
  ) {
    this.state = {
      focusCity: null,
      window: lastNDays(meta, windowDays),
      mode: "unit_square",
      hoveredSegment: null,
    };
    this.panels = {
      neighborhood: emptySlot(),
      curves: emptySlot(),
      glyph: emptySlot(),
      isolation: emptySlot(),
      map: emptySlot(),
    };
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  /** Run one panel fetch under the stale-token discipline. */
  private async fetchPanel<P extends Panel>(
    panel: P,
    request: () => Promise<{ data: PanelsState[P]["data"]; buildId: number }>,
  ): Promise<void> {
    const token = ++this.tokens[panel];
    try {
      const { data, buildId } = await request();
      if (token !== this.tokens[panel]) return; // stale: newer request in flight
      this.panels[panel].data = data;
      this.panels[panel].buildId = buildId;
      this.notify();
    } catch {
      if (token !== this.tokens[panel]) return;
      this.panels[panel].data = null;
      this.panels[panel].buildId = null;
      this.notify();
    }
  }

  /** Select a focus city: all five panels refresh. */
  async selectCity(name: string): Promise<void> {
    this.state.focusCity = name;
    this.state.hoveredSegment = null;
    this.notify();
    const { a, b } = this.state.window;
    await Promise.all([
      this.fetchPanel("neighborhood", () => this.api.neighborhood(name, b)),
      this.fetchPanel("curves", () => this.api.curves(name, a, b)),
      this.fetchPanel("glyph", () => this.api.glyph(name, a, b, this.state.mode)),
      this.fetchPanel("isolation", () => this.api.isolation(name, a, b)),
      this.fetchPanel("map", () => this.api.map(name)),
    ]);
  }

  /**
   * Move the analysis window. Requests fire only when the clamped window
   * actually differs from the current one; window-dependent panels refetch.
   */
  async dragWindow(a: string, b: string): Promise<boolean> {
    const clamped = clampWindow(a, b, this.meta);
    if (clamped.a === this.state.window.a && clamped.b === this.state.window.b) {
      return false;
    }
    this.state.window = clamped;
    this.notify();
    const name = this.state.focusCity;
    if (name === null) return true;
    await Promise.all([
      this.fetchPanel("curves", () => this.api.curves(name, clamped.a, clamped.b)),
      this.fetchPanel("glyph", () => this.api.glyph(name, clamped.a, clamped.b, this.state.mode)),
      this.fetchPanel("isolation", () => this.api.isolation(name, clamped.a, clamped.b)),
      this.fetchPanel("neighborhood", () => this.api.neighborhood(name, clamped.b)),
    ]);
    return true;
  }

  async setMode(mode: RiskMode): Promise<void> {
    if (mode === this.state.mode) return;
    this.state.mode = mode;
    this.notify();
    const name = this.state.focusCity;
    if (name === null) return;
    const { a, b } = this.state.window;
    await this.fetchPanel("glyph", () => this.api.glyph(name, a, b, mode));
  }

  hoverSegment(name: string | null): void {
    this.state.hoveredSegment = name;
    this.notify();
  }

  /**
   * Panel-consistency invariant: once interactions settle, every loaded
   * panel describes the same (focus city, window) and one single build.
   */
  isConsistent(): boolean {
    const name = this.state.focusCity;
    if (name === null) return true;
    const { a, b } = this.state.window;
    const builds = new Set<number>();

    const neighborhood = this.panels.neighborhood;
    if (neighborhood.data !== null) {
      if (neighborhood.data.city !== name || neighborhood.data.as_of !== b) return false;
      builds.add(neighborhood.buildId ?? -1);
    }
    const curves = this.panels.curves;
    if (curves.data !== null) {
      if (curves.data.city !== name) return false;
      if (curves.data.window.a !== a || curves.data.window.b !== b) return false;
      builds.add(curves.buildId ?? -1);
    }
    const glyph = this.panels.glyph;
    if (glyph.data !== null) {
      if (glyph.data.focus.city !== name) return false;
      if (glyph.data.window.a !== a || glyph.data.window.b !== b) return false;
      if (glyph.data.mode !== this.state.mode) return false;
      builds.add(glyph.buildId ?? -1);
    }
    const isolation = this.panels.isolation;
    if (isolation.buildId !== null) { // 204 keeps data null but names a build
      if (isolation.data !== null && isolation.data.city !== name) return false;
      builds.add(isolation.buildId);
    }
    const map = this.panels.map;
    if (map.data !== null) {
      const focusFeatures = map.data.features.filter((f) => f.properties.focus);
      if (focusFeatures.length !== 1) return false;
      builds.add(map.buildId ?? -1);
    }
    return builds.size <= 1;
  }
}
