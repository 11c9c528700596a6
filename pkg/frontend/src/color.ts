// Single-hue sequential ramp: saturation 0 -> lightest, 1 -> darkest.
// The API ships saturations in [0, 1]; the hue choice lives here only.

const HUE = 214; // steel blue

export function ramp(saturation: number): string {
  const s = Math.min(1, Math.max(0, saturation));
  const lightness = 94 - s * 66; // 94% (near white) down to 28% (dark)
  const chroma = 30 + s * 45;
  return `hsl(${HUE}, ${chroma.toFixed(0)}%, ${lightness.toFixed(1)}%)`;
}
