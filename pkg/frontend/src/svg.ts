/** Minimal deterministic SVG scene builder (fixed size, fonts, colors). */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 40, right: 30, bottom: 55, left: 70 };
export const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
  log: boolean;
}

export function scale(
  domain: [number, number],
  range: [number, number],
  log = false,
): Scale {
  const [d0, d1] = log ? [Math.log10(domain[0]), Math.log10(domain[1])] : domain;
  const f = ((v: number) => {
    const x = log ? Math.log10(v) : v;
    const t = d1 === d0 ? 0.5 : (x - d0) / (d1 - d0);
    return range[0] + t * (range[1] - range[0]);
  }) as Scale;
  f.domain = domain;
  f.range = range;
  f.log = log;
  return f;
}

export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0);
  return parseFloat(v.toPrecision(4)).toString();
}

export function ticks(s: Scale, count = 6): number[] {
  const [lo, hi] = s.domain;
  if (s.log) {
    const out: number[] = [];
    for (let e = Math.ceil(Math.log10(lo)); e <= Math.floor(Math.log10(hi)); e++) {
      out.push(10 ** e);
    }
    return out.length >= 2 ? out : [lo, hi];
  }
  const span = hi - lo;
  const step = 10 ** Math.floor(Math.log10(span / count));
  const mult = span / count / step >= 5 ? 5 : span / count / step >= 2 ? 2 : 1;
  const st = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(lo / st) * st; v <= hi + 1e-12 * span; v += st) {
    out.push(parseFloat(v.toPrecision(12)));
  }
  return out;
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  body = "",
): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt2(v) : v}"`)
    .join(" ");
  return body === "" && tag !== "text"
    ? `<${tag} ${a}/>`
    : `<${tag} ${a}>${body}</${tag}>`;
}

function fmt2(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

export function text(
  x: number,
  y: number,
  body: string,
  anchor = "middle",
  size = 13,
): string {
  return `<text x="${fmt2(x)}" y="${fmt2(y)}" text-anchor="${anchor}" ` +
    `font-size="${size}" font-family="Helvetica, Arial, sans-serif">${body}</text>`;
}

export function polyline(
  pts: [number, number][],
  stroke: string,
  dash = "",
  width = 2,
): string {
  const p = pts.map(([x, y]) => `${fmt2(x)},${fmt2(y)}`).join(" ");
  const d = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<polyline points="${p}" fill="none" stroke="${stroke}" stroke-width="${width}"${d}/>`;
}

export function axes(
  xs: Scale,
  ys: Scale,
  xLabel: string,
  yLabel: string,
  title: string,
): string {
  const parts: string[] = [];
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  parts.push(el("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "#000" }));
  parts.push(el("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "#000" }));
  for (const t of ticks(xs)) {
    const px = xs(t);
    parts.push(el("line", { x1: px, y1: y0, x2: px, y2: y0 + 5, stroke: "#000" }));
    parts.push(text(px, y0 + 20, fmt(t)));
  }
  for (const t of ticks(ys)) {
    const py = ys(t);
    parts.push(el("line", { x1: x0 - 5, y1: py, x2: x0, y2: py, stroke: "#000" }));
    parts.push(text(x0 - 8, py + 4, fmt(t), "end"));
  }
  parts.push(text((x0 + x1) / 2, HEIGHT - 12, xLabel));
  parts.push(
    `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" ` +
      `font-family="Helvetica, Arial, sans-serif" transform="rotate(-90 18 ${(y0 + y1) / 2})">${yLabel}</text>`,
  );
  parts.push(text(WIDTH / 2, 22, title, "middle", 16));
  return parts.join("\n");
}

export function document(body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n` +
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>\n` +
    body +
    "\n</svg>\n"
  );
}

/** Blue-to-red map on [0, 1], fixed palette. */
export function heat(v: number): string {
  const t = Math.max(0, Math.min(1, v));
  const r = Math.round(40 + 205 * t);
  const g = Math.round(60 + 40 * (1 - Math.abs(2 * t - 1)));
  const b = Math.round(40 + 205 * (1 - t));
  return `rgb(${r},${g},${b})`;
}
