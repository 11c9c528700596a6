// DOM rendering. Everything here draws payloads verbatim; no analytics.

import { ramp } from "./color.js";
import { glyphArcs } from "./glyph.js";
import type { DashboardStore } from "./store.js";
import type { CurvePoint, MapPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function renderGlyph(store: DashboardStore, host: HTMLElement): void {
  host.replaceChildren();
  const payload = store.panels.glyph.data;
  if (!payload) return;

  const size = 260;
  const cx = size / 2;
  const cy = size / 2;
  const svg = el("svg", { viewBox: `0 0 ${size} ${size}`, class: "glyph" });

  for (const arc of glyphArcs(payload, cx, cy, 58, 108)) {
    const path = el("path", {
      d: arc.path,
      fill: ramp(arc.saturation),
      stroke: "#fff",
      "stroke-width": "1.5",
      class: store.state.hoveredSegment === arc.city ? "segment hovered" : "segment",
    });
    const tip = el("title");
    tip.textContent = `${arc.city}: ${arc.windowTotal} cases in window`;
    path.appendChild(tip);
    path.addEventListener("mouseenter", () => store.hoverSegment(arc.city));
    path.addEventListener("mouseleave", () => store.hoverSegment(null));
    svg.appendChild(path);
  }

  const inner = el("circle", {
    cx: String(cx),
    cy: String(cy),
    r: "50",
    fill: ramp(payload.focus.saturation),
    stroke: "#fff",
    "stroke-width": "2",
  });
  const tip = el("title");
  tip.textContent = `${payload.focus.city}: ${payload.focus.window_total} cases in window`;
  inner.appendChild(tip);
  svg.appendChild(inner);
  host.appendChild(svg);

  const caption = document.createElement("p");
  caption.className = "caption";
  caption.textContent = payload.segments.length
    ? `${payload.segments.length} active neighbors, ${payload.window.a} to ${payload.window.b}`
    : `no neighbors with cases by ${payload.window.b}`;
  host.appendChild(caption);
}

function polyline(points: CurvePoint[], width: number, height: number, yMax: number): string {
  if (points.length === 1) {
    const y = height - (points[0]!.value / (yMax || 1)) * height;
    return `0,${y.toFixed(1)} ${width},${y.toFixed(1)}`;
  }
  const dx = width / (points.length - 1);
  return points
    .map((p, i) => `${(i * dx).toFixed(1)},${(height - (p.value / (yMax || 1)) * height).toFixed(1)}`)
    .join(" ");
}

function renderCurvePair(
  host: HTMLElement,
  title: string,
  neighborhood: CurvePoint[],
  city: CurvePoint[],
  annotation?: string,
): void {
  const width = 320;
  const height = 120;
  const yMax = Math.max(1, ...neighborhood.map((p) => p.value), ...city.map((p) => p.value));

  const block = document.createElement("figure");
  block.className = "curves";
  const label = document.createElement("figcaption");
  label.textContent = title;
  block.appendChild(label);

  const svg = el("svg", { viewBox: `0 0 ${width} ${height}`, class: "chart" });
  svg.appendChild(el("polyline", {
    points: polyline(neighborhood, width, height, yMax),
    class: "line neighborhood",
  }));
  svg.appendChild(el("polyline", {
    points: polyline(city, width, height, yMax),
    class: "line city",
  }));
  block.appendChild(svg);

  const legend = document.createElement("p");
  legend.className = "legend";
  legend.innerHTML =
    `<span class="swatch city"></span>city ${city.at(-1)?.value ?? 0}` +
    ` <span class="swatch neighborhood"></span>neighborhood ${neighborhood.at(-1)?.value ?? 0}`;
  block.appendChild(legend);

  if (annotation) {
    const note = document.createElement("p");
    note.className = "isolation-note";
    note.textContent = annotation;
    block.appendChild(note);
  }
  host.appendChild(block);
}

export function renderCurves(store: DashboardStore, host: HTMLElement): void {
  host.replaceChildren();
  const payload = store.panels.curves.data;
  if (!payload) return;
  const isolation = store.panels.isolation.data;

  renderCurvePair(
    host,
    "accumulated since first notification",
    payload.curves.neighborhood_total,
    payload.curves.city_total,
  );
  renderCurvePair(
    host,
    "accumulated inside the window",
    payload.curves.neighborhood_window,
    payload.curves.city_window,
    isolation ? `mean isolation in window: ${isolation.display}` : undefined,
  );

  const verdict = document.createElement("p");
  verdict.className = "verdict";
  verdict.textContent = payload.city_dominates
    ? `${payload.city} dominates its neighborhood in this window`
    : `the neighborhood is not dominated by ${payload.city} in this window`;
  host.appendChild(verdict);
}

export function renderIsolation(store: DashboardStore, host: HTMLElement): void {
  host.replaceChildren();
  const slot = store.panels.isolation;
  const p = document.createElement("p");
  if (slot.buildId === null) {
    p.textContent = "";
  } else if (slot.data === null) {
    p.textContent = "no isolation data in this window";
  } else {
    p.textContent = `isolation: ${slot.data.display} over ${slot.data.sample_count} days`;
  }
  host.appendChild(p);
}

interface Projector {
  x(lon: number): number;
  y(lat: number): number;
}

function projector(payload: MapPayload, width: number, height: number): Projector {
  let lonMin = Infinity, lonMax = -Infinity, latMin = Infinity, latMax = -Infinity;
  for (const feature of payload.features) {
    for (const ring of feature.geometry.coordinates) {
      for (const [lon, lat] of ring as unknown as [number, number][]) {
        lonMin = Math.min(lonMin, lon); lonMax = Math.max(lonMax, lon);
        latMin = Math.min(latMin, lat); latMax = Math.max(latMax, lat);
      }
    }
  }
  const sx = width / (lonMax - lonMin || 1);
  const sy = height / (latMax - latMin || 1);
  const s = Math.min(sx, sy) * 0.95;
  return {
    x: (lon) => (lon - lonMin) * s + 8,
    y: (lat) => (latMax - lat) * s + 8,
  };
}

export function renderMap(store: DashboardStore, host: HTMLElement): void {
  host.replaceChildren();
  const payload = store.panels.map.data;
  if (!payload) return;

  const width = 420;
  const height = 300;
  const proj = projector(payload, width - 16, height - 16);
  const svg = el("svg", { viewBox: `0 0 ${width} ${height}`, class: "map" });

  for (const feature of payload.features) {
    const d = feature.geometry.coordinates
      .map((ring) =>
        (ring as unknown as [number, number][])
          .map(([lon, lat], i) => `${i ? "L" : "M"}${proj.x(lon).toFixed(1)} ${proj.y(lat).toFixed(1)}`)
          .join(" ") + " Z",
      )
      .join(" ");
    const cls = feature.properties.focus
      ? "city-shape focus"
      : feature.properties.neighbor
        ? "city-shape neighbor"
        : "city-shape";
    const path = el("path", { d, class: cls });
    const tip = el("title");
    tip.textContent = feature.properties.name;
    path.appendChild(tip);
    path.addEventListener("click", () => {
      void store.selectCity(feature.properties.name.trim().toLowerCase());
    });
    svg.appendChild(path);
  }
  host.appendChild(svg);
}

export function renderNeighborhood(store: DashboardStore, host: HTMLElement): void {
  host.replaceChildren();
  const payload = store.panels.neighborhood.data;
  if (!payload) return;
  const p = document.createElement("p");
  p.textContent =
    `${payload.members.length} members (k=${payload.k}), ` +
    `${payload.active.length} with cases by ${payload.as_of}`;
  host.appendChild(p);
  const list = document.createElement("ul");
  for (const member of payload.members) {
    const item = document.createElement("li");
    item.textContent = member;
    item.className = payload.active.includes(member) ? "active" : "inactive";
    list.appendChild(item);
  }
  host.appendChild(list);
}
