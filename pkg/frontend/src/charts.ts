import {
  HEIGHT,
  MARGIN,
  WIDTH,
  axes,
  document as svgDocument,
  el,
  fmt,
  heat,
  polyline,
  scale,
  text,
} from "./svg.js";
import { GridRow, SweepRow, TailRow } from "./schemas.js";

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

const PLOT = {
  x0: MARGIN.left,
  x1: WIDTH - MARGIN.right,
  y0: HEIGHT - MARGIN.bottom,
  y1: MARGIN.top,
};

/** Survival function of the lifetime at fixed p: k -> p^(k^gamma). */
export function lifetimeTail(p: number, gamma: number, k: number): number {
  return k === 0 ? 1 : Math.exp(Math.pow(k, gamma) * Math.log(p));
}

export const DEFAULT_GRID: GridRow[] = [
  { p: 0.3, gamma: 0.5 },
  { p: 0.3, gamma: 1.0 },
  { p: 0.3, gamma: 2.0 },
  { p: 0.7, gamma: 0.5 },
  { p: 0.7, gamma: 1.0 },
  { p: 0.7, gamma: 2.0 },
];

export function weibullTails(grid: GridRow[]): string {
  const kMax = 12;
  const floor = 1e-8;
  const xs = scale([0, kMax], [PLOT.x0, PLOT.x1]);
  const ys = scale([floor, 1], [PLOT.y0, PLOT.y1], true);
  const parts: string[] = [];
  parts.push(
    axes(xs, ys, "k", "P(lifetime >= k)", "Lifetime survival tails"),
  );
  grid.forEach((row, i) => {
    const pts: [number, number][] = [];
    for (let k = 0; k <= kMax; k++) {
      const v = lifetimeTail(row.p, row.gamma, k);
      if (v < floor) break;
      pts.push([xs(k), ys(v)]);
    }
    const dash = row.gamma === 1 ? "6,4" : "";
    parts.push(polyline(pts, PALETTE[i % PALETTE.length], dash));
    const last = pts[pts.length - 1];
    parts.push(
      text(Math.min(last[0] + 6, WIDTH - 4), last[1], `p=${row.p}, g=${row.gamma}`, "start", 11),
    );
  });
  return svgDocument(parts.join("\n"));
}

/** Critical curve gamma_c(beta) = 1/(2 beta) — the only formula used here. */
export function criticalGamma(beta: number): number {
  return 1 / (2 * beta);
}

function sweepCells(rows: SweepRow[]): string[] {
  const betas = [...new Set(rows.map((r) => r.beta))].sort((a, b) => a - b);
  const gammas = [...new Set(rows.map((r) => r.gamma))].sort((a, b) => a - b);
  const cw = (PLOT.x1 - PLOT.x0) / betas.length;
  const ch = (PLOT.y0 - PLOT.y1) / gammas.length;
  return rows.map((r) => {
    const i = betas.indexOf(r.beta);
    const j = gammas.indexOf(r.gamma);
    return el("rect", {
      x: PLOT.x0 + i * cw,
      y: PLOT.y0 - (j + 1) * ch,
      width: cw,
      height: ch,
      fill: heat(r.estimate),
      stroke: "#ffffff",
      "stroke-width": 1,
    });
  });
}

function sweepScales(rows: SweepRow[]) {
  const betas = rows.map((r) => r.beta);
  const gammas = rows.map((r) => r.gamma);
  const xs = scale([Math.min(...betas), Math.max(...betas)], [PLOT.x0, PLOT.x1]);
  const ys = scale([Math.min(...gammas), Math.max(...gammas)], [PLOT.y0, PLOT.y1]);
  return { xs, ys };
}

export function sweepHeatmap(rows: SweepRow[], title = "Survival frequency"): string {
  const { xs, ys } = sweepScales(rows);
  const parts = sweepCells(rows);
  parts.push(axes(xs, ys, "beta", "gamma", title));
  return svgDocument(parts.join("\n"));
}

export function phaseDiagram(rows: SweepRow[]): string {
  const { xs, ys } = sweepScales(rows);
  const parts = sweepCells(rows);
  const [bLo, bHi] = xs.domain;
  const [gLo, gHi] = ys.domain;
  const curve: [number, number][] = [];
  for (let i = 0; i <= 400; i++) {
    const beta = bLo + ((bHi - bLo) * i) / 400;
    const g = criticalGamma(beta);
    if (g >= gLo && g <= gHi) curve.push([xs(beta), ys(g)]);
  }
  parts.push(axes(xs, ys, "beta", "gamma", "Phase diagram"));
  if (curve.length >= 2) parts.push(polyline(curve, "#000000", "", 2.5));
  parts.push(text(PLOT.x1 - 8, PLOT.y1 + 16, "gamma_c = 1/(2 beta)", "end", 12));
  return svgDocument(parts.join("\n"));
}

export function ratioCurve(
  rows: TailRow[],
  bandLow?: number,
  bandHigh?: number,
): string {
  const pts = rows.filter((r) => Number.isFinite(r.ratio) && r.n > 0);
  if (pts.length === 0) {
    throw new Error("no rows with a finite normalized ratio");
  }
  const ns = pts.map((r) => r.n);
  const ratios = pts.map((r) => r.ratio);
  const cand = [...ratios];
  if (bandLow !== undefined) cand.push(bandLow);
  if (bandHigh !== undefined) cand.push(bandHigh);
  const lo = Math.min(...cand) * 0.8;
  const hi = Math.max(...cand) * 1.2;
  const xs = scale([Math.min(...ns), Math.max(...ns)], [PLOT.x0, PLOT.x1], true);
  const ys = scale([lo, hi], [PLOT.y0, PLOT.y1]);
  const parts: string[] = [];
  if (bandLow !== undefined && bandHigh !== undefined) {
    parts.push(
      el("rect", {
        x: PLOT.x0,
        y: ys(bandHigh),
        width: PLOT.x1 - PLOT.x0,
        height: ys(bandLow) - ys(bandHigh),
        fill: "#d9e8f5",
      }),
    );
  }
  parts.push(axes(xs, ys, "n", "normalized ratio", "Normalized tail ratio"));
  for (const b of [bandLow, bandHigh]) {
    if (b !== undefined) {
      parts.push(
        polyline(
          [
            [PLOT.x0, ys(b)],
            [PLOT.x1, ys(b)],
          ],
          "#555555",
          "4,4",
          1.5,
        ),
      );
      parts.push(text(PLOT.x1 - 4, ys(b) - 4, fmt(b), "end", 11));
    }
  }
  parts.push(polyline(pts.map((r) => [xs(r.n), ys(r.ratio)]), PALETTE[0]));
  for (const r of pts) {
    parts.push(
      el("circle", { cx: xs(r.n), cy: ys(r.ratio), r: 3, fill: PALETTE[0] }),
    );
  }
  return svgDocument(parts.join("\n"));
}
