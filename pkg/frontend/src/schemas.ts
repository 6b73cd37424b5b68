import { z } from "zod";

/** Row schemas for the CSV contracts of the simulation CLI. */

const finite = z.number().refine((x) => Number.isFinite(x), "must be finite");
// some tail columns are NaN by contract for laws without a (beta, L) scaling
const maybeNan = z.union([z.number(), z.nan()]);

export const TailRow = z.object({
  n: z.number().int().nonnegative(),
  value: finite,
  err: finite,
  method: z.enum(["exact", "mc", "rb"]),
  beta: maybeNan,
  gamma: finite.positive(),
  L_at_n2gamma: maybeNan,
  ratio: maybeNan,
});
export type TailRow = z.infer<typeof TailRow>;

export const SweepRow = z.object({
  beta: finite.positive(),
  gamma: finite.positive(),
  reps: z.number().int().positive(),
  horizon: z.number().int().positive(),
  survived: z.number().int().nonnegative(),
  estimate: finite.min(0).max(1),
  ci_low: finite.min(0).max(1),
  ci_high: finite.min(0).max(1),
  verdict: z.enum([
    "ExtinctAS",
    "SurvivesWP",
    "BoundaryInconclusive",
    "OutsideHypotheses",
  ]),
});
export type SweepRow = z.infer<typeof SweepRow>;

/** Optional (p, gamma) grid for the lifetime-tail figure. */
export const GridRow = z.object({
  p: finite.gt(0).lt(1),
  gamma: finite.positive(),
});
export type GridRow = z.infer<typeof GridRow>;

export const KINDS = [
  "WeibullTails",
  "PhaseDiagram",
  "RatioCurve",
  "SweepHeatmap",
] as const;
export type Kind = (typeof KINDS)[number];

export interface FigureSpec {
  kind: Kind;
  inputCsv: string | null;
  outputImage: string;
  /** band overlays for RatioCurve, computed upstream by `constants` */
  bandLow?: number;
  bandHigh?: number;
}
