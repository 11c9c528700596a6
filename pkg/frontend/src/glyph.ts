// Donut-glyph geometry. Pure functions: payload in, SVG arc descriptions out.
// Segment order and widths are contracts: equal angular width per segment,
// placed clockwise from 12 o'clock in the order the API delivered them.

import type { GlyphPayload } from "./types.js";

export interface GlyphArc {
  city: string;
  saturation: number;
  windowTotal: number;
  /** radians, clockwise from 12 o'clock */
  startAngle: number;
  endAngle: number;
  path: string;
}

const TAU = 2 * Math.PI;

/** Point on a circle at `angle` radians clockwise from 12 o'clock. */
function polar(cx: number, cy: number, r: number, angle: number): [number, number] {
  return [cx + r * Math.sin(angle), cy - r * Math.cos(angle)];
}

export function annularSectorPath(
  cx: number,
  cy: number,
  rInner: number,
  rOuter: number,
  startAngle: number,
  endAngle: number,
): string {
  const sweep = endAngle - startAngle;
  const largeArc = sweep > Math.PI ? 1 : 0;
  const [x0, y0] = polar(cx, cy, rOuter, startAngle);
  const [x1, y1] = polar(cx, cy, rOuter, endAngle);
  const [x2, y2] = polar(cx, cy, rInner, endAngle);
  const [x3, y3] = polar(cx, cy, rInner, startAngle);
  return [
    `M ${x0.toFixed(3)} ${y0.toFixed(3)}`,
    `A ${rOuter} ${rOuter} 0 ${largeArc} 1 ${x1.toFixed(3)} ${y1.toFixed(3)}`,
    `L ${x2.toFixed(3)} ${y2.toFixed(3)}`,
    `A ${rInner} ${rInner} 0 ${largeArc} 0 ${x3.toFixed(3)} ${y3.toFixed(3)}`,
    "Z",
  ].join(" ");
}

export function glyphArcs(
  payload: GlyphPayload,
  cx: number,
  cy: number,
  rInner: number,
  rOuter: number,
): GlyphArc[] {
  const n = payload.segments.length;
  if (n === 0) return [];
  const step = TAU / n;
  return payload.segments.map((segment, i) => {
    const startAngle = i * step;
    const endAngle = startAngle + step;
    return {
      city: segment.city,
      saturation: segment.saturation,
      windowTotal: segment.window_total,
      startAngle,
      endAngle,
      // a hair under the full step for a single full-circle segment, so the
      // path does not degenerate when start == end mod tau
      path: annularSectorPath(cx, cy, rInner, rOuter, startAngle,
                              n === 1 ? endAngle - 1e-4 : endAngle),
    };
  });
}
