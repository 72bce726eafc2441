import type { ColorScale } from "./state";

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

function rgb(r: number, g: number, b: number): string {
  const c = (v: number) => Math.max(0, Math.min(255, Math.round(v)));
  return `rgb(${c(r)},${c(g)},${c(b)})`;
}

/** Piecewise-linear ramp through a list of RGB stops, t in [0, 1]. */
function ramp(stops: [number, number, number][], t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const pos = clamped * (stops.length - 1);
  const i = Math.min(stops.length - 2, Math.floor(pos));
  const f = pos - i;
  const [r1, g1, b1] = stops[i];
  const [r2, g2, b2] = stops[i + 1];
  return rgb(lerp(r1, r2, f), lerp(g1, g2, f), lerp(b1, b2, f));
}

const RED_YELLOW_GREEN: [number, number, number][] = [
  [26, 152, 80],
  [255, 255, 191],
  [215, 48, 39],
];

// blue -> light gray -> orange, distinguishable under red-green deficits
const COLORBLIND_SAFE: [number, number, number][] = [
  [69, 117, 180],
  [247, 247, 247],
  [230, 97, 1],
];

/** Outcome-association color: value in [lo, hi], low = good (green or
 * blue), high = bad (red or orange). */
export function outcomeColor(
  value: number,
  lo: number,
  hi: number,
  scale: ColorScale = "red-yellow-green"
): string {
  const t = hi > lo ? (value - lo) / (hi - lo) : 0.5;
  return ramp(scale === "red-yellow-green" ? RED_YELLOW_GREEN : COLORBLIND_SAFE, t);
}

/** Grayscale for the hexmap background: log-scaled count, darker = denser. */
export function densityColor(count: number, maxCount: number): string {
  const t = maxCount > 0 ? Math.log1p(count) / Math.log1p(maxCount) : 0;
  const v = Math.round(lerp(245, 64, t));
  return rgb(v, v, v);
}
