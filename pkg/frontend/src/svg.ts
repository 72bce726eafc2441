/** Tiny SVG-string builder. Renderers return plain strings so they can
 * be unit-tested without a DOM and injected with innerHTML in the app. */

export type Attrs = Record<string, string | number>;

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function el(tag: string, attrs: Attrs, children: string[] = []): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`)
    .join(" ");
  const open = parts ? `<${tag} ${parts}>` : `<${tag}>`;
  return children.length ? `${open}${children.join("")}</${tag}>` : `${open}</${tag}>`;
}

export function text(tag: string, attrs: Attrs, content: string): string {
  return el(tag, attrs, [esc(content)]);
}

export function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  const rounded = Math.round(v * 1000) / 1000;
  return String(rounded);
}

export function svgRoot(width: number, height: number, children: string[]): string {
  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      viewBox: `0 0 ${width} ${height}`,
      width,
      height,
    },
    children
  );
}

/** Linear scale mapping [d0, d1] to [r0, r1]. */
export function scaleLinear(d0: number, d1: number, r0: number, r1: number) {
  const span = d1 - d0;
  return (v: number) => (span === 0 ? (r0 + r1) / 2 : r0 + ((v - d0) / span) * (r1 - r0));
}
