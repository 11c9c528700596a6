import { describe, expect, it } from "vitest";

import { ramp } from "../src/color.js";
import { annularSectorPath, glyphArcs } from "../src/glyph.js";
import { glyphPayload } from "./helpers.js";

const TAU = 2 * Math.PI;

describe("glyph geometry", () => {
  it("produces one equal-width arc per payload segment", () => {
    const payload = glyphPayload("foco", "2020-04-20", "2020-05-09", "unit_square", 12);
    const arcs = glyphArcs(payload, 100, 100, 50, 90);
    expect(arcs).toHaveLength(12);
    for (const arc of arcs) {
      expect(arc.endAngle - arc.startAngle).toBeCloseTo(TAU / 12, 12); // 30 degrees
    }
  });

  it("orders arcs clockwise from 12 o'clock following payload order", () => {
    const payload = glyphPayload("foco", "2020-04-20", "2020-05-09", "unit_square", 5);
    const arcs = glyphArcs(payload, 100, 100, 50, 90);
    expect(arcs[0]!.startAngle).toBe(0);
    expect(arcs.map((a) => a.city)).toEqual(payload.segments.map((s) => s.city));
    for (let i = 1; i < arcs.length; i++) {
      expect(arcs[i]!.startAngle).toBeCloseTo(arcs[i - 1]!.endAngle, 12); // contiguous
    }
    expect(arcs.at(-1)!.endAngle).toBeCloseTo(TAU, 12);
  });

  it("carries saturation and window totals through untouched", () => {
    const payload = glyphPayload("foco", "2020-04-20", "2020-05-09", "unit_square", 3);
    const arcs = glyphArcs(payload, 100, 100, 50, 90);
    expect(arcs.map((a) => a.saturation)).toEqual(payload.segments.map((s) => s.saturation));
    expect(arcs.map((a) => a.windowTotal)).toEqual(
      payload.segments.map((s) => s.window_total),
    );
  });

  it("renders an empty ring for a glyph with no active neighbors", () => {
    const payload = glyphPayload("foco", "2020-04-20", "2020-05-09", "unit_square", 0);
    expect(glyphArcs(payload, 100, 100, 50, 90)).toEqual([]);
  });

  it("emits well-formed annular sector paths", () => {
    const path = annularSectorPath(100, 100, 50, 90, 0, Math.PI / 3);
    expect(path).toMatch(/^M .+ A 90 90 .+ L .+ A 50 50 .+ Z$/);
    // starts at 12 o'clock on the outer radius
    expect(path.startsWith("M 100.000 10.000")).toBe(true);
  });
});

describe("color ramp", () => {
  function lightness(color: string): number {
    const match = /,\s*([\d.]+)%\)$/.exec(color);
    return Number(match![1]);
  }

  it("maps saturation 0 to the lightest color and 1 to the darkest", () => {
    const stops = [0, 0.25, 0.5, 0.75, 1].map((s) => lightness(ramp(s)));
    for (let i = 1; i < stops.length; i++) {
      expect(stops[i]!).toBeLessThan(stops[i - 1]!); // strictly darkening
    }
  });

  it("clamps out-of-range saturations", () => {
    expect(ramp(-0.5)).toBe(ramp(0));
    expect(ramp(1.5)).toBe(ramp(1));
  });

  it("stays on a single hue", () => {
    const hues = [0, 0.5, 1].map((s) => /hsl\((\d+),/.exec(ramp(s))![1]);
    expect(new Set(hues).size).toBe(1);
  });
});
