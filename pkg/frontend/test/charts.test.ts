import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import {
  DEFAULT_GRID,
  criticalGamma,
  lifetimeTail,
  phaseDiagram,
  ratioCurve,
  sweepHeatmap,
  weibullTails,
} from "../src/charts.js";
import { SchemaError, parseCsv } from "../src/csv.js";
import { parseArgs, main } from "../src/cli.js";
import { renderSvg, render } from "../src/render.js";
import { GridRow, SweepRow, TailRow } from "../src/schemas.js";

const SWEEP_CSV = [
  "beta,gamma,reps,horizon,survived,estimate,ci_low,ci_high,verdict",
  "0.2,0.5,50,400,48,0.96,0.8639,0.9893,SurvivesWP",
  "0.2,1.0,50,400,41,0.82,0.6912,0.9031,SurvivesWP",
  "0.8,0.5,50,400,30,0.6,0.4609,0.7242,SurvivesWP",
  "0.8,1.0,50,400,0,0.0,0.0,0.0712,ExtinctAS",
].join("\n");

const TAIL_CSV = [
  "n,value,err,method,beta,gamma,L_at_n2gamma,ratio",
  "200,0.0035354278053175734,9.207157862384586e-09,exact,0.5,1.0,0.5,1.4141711221270293",
  "400,0.0017677565669366696,4.65314742317973e-09,exact,0.5,1.0,0.5,1.4142052535493357",
].join("\n");

describe("csv parsing", () => {
  it("parses and validates sweep rows", () => {
    const rows = parseCsv(SWEEP_CSV, SweepRow);
    expect(rows).toHaveLength(4);
    expect(rows[0].verdict).toBe("SurvivesWP");
    expect(rows[3].estimate).toBe(0);
  });

  it("rejects empty CSV", () => {
    expect(() => parseCsv("", SweepRow)).toThrow(SchemaError);
    expect(() =>
      parseCsv("beta,gamma,reps,horizon,survived,estimate,ci_low,ci_high,verdict", SweepRow),
    ).toThrow(/no data rows/);
  });

  it("rejects missing columns and bad values", () => {
    expect(() => parseCsv("beta,gamma\n0.5,1", SweepRow)).toThrow(/missing required/);
    const bad = SWEEP_CSV.replace("SurvivesWP", "Maybe");
    expect(() => parseCsv(bad, SweepRow)).toThrow(SchemaError);
  });

  it("allows NaN in the unscaled tail columns", () => {
    const nanRow = TAIL_CSV + "\n5,0.1,0.001,mc,nan,1.0,nan,nan";
    const rows = parseCsv(nanRow, TailRow);
    expect(rows[2].ratio).toBeNaN();
  });
});

describe("lifetime tails (Figure 1 ordering)", () => {
  it("gamma > 1 decays below geometric, gamma < 1 above, at k >= 2", () => {
    for (const p of [0.3, 0.7]) {
      for (let k = 2; k <= 10; k++) {
        const geo = lifetimeTail(p, 1.0, k);
        expect(lifetimeTail(p, 2.0, k)).toBeLessThan(geo);
        expect(lifetimeTail(p, 0.5, k)).toBeGreaterThan(geo);
      }
    }
  });

  it("renders a curve per grid row", () => {
    const svg = weibullTails(DEFAULT_GRID);
    expect(svg).toContain("<svg");
    expect((svg.match(/<polyline/g) ?? []).length).toBe(DEFAULT_GRID.length);
  });
});

describe("phase diagram", () => {
  it("critical curve passes through (beta, gamma) = (0.5, 1)", () => {
    expect(criticalGamma(0.5)).toBe(1.0);
  });

  it("overlays the curve on the sweep heatmap", () => {
    const rows = parseCsv(SWEEP_CSV, SweepRow);
    const svg = phaseDiagram(rows);
    expect((svg.match(/<rect/g) ?? []).length).toBeGreaterThanOrEqual(rows.length);
    expect(svg).toContain("gamma_c = 1/(2 beta)");
    expect(svg).toContain("<polyline");
  });

  it("heatmap renders one cell per row", () => {
    const svg = sweepHeatmap(parseCsv(SWEEP_CSV, SweepRow));
    // background rect + 4 cells
    expect((svg.match(/<rect/g) ?? []).length).toBe(5);
  });
});

describe("ratio curve", () => {
  it("draws points and the band overlay", () => {
    const rows = parseCsv(TAIL_CSV, TailRow);
    const svg = ratioCurve(rows, 0.1506, 2.0);
    expect((svg.match(/<circle/g) ?? []).length).toBe(2);
    expect(svg).toContain("0.1506");
    expect(svg).toContain("stroke-dasharray");
  });

  it("rejects rows without a finite ratio", () => {
    const rows = parseCsv(
      "n,value,err,method,beta,gamma,L_at_n2gamma,ratio\n1,0.5,0.001,mc,nan,1.0,nan,nan",
      TailRow,
    );
    expect(() => ratioCurve(rows)).toThrow(/finite normalized ratio/);
  });
});

describe("render pipeline", () => {
  it("is deterministic for identical input", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const csv = join(dir, "sweep.csv");
    writeFileSync(csv, SWEEP_CSV);
    const spec = { kind: "PhaseDiagram" as const, inputCsv: csv, outputImage: "x.svg" };
    expect(renderSvg(spec)).toBe(renderSvg(spec));
  });

  it("writes svg and png files", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const csv = join(dir, "sweep.csv");
    writeFileSync(csv, SWEEP_CSV);
    const svgOut = join(dir, "fig.svg");
    const pngOut = join(dir, "fig.png");
    render({ kind: "SweepHeatmap", inputCsv: csv, outputImage: svgOut });
    render({ kind: "SweepHeatmap", inputCsv: csv, outputImage: pngOut });
    expect(readFileSync(svgOut, "utf-8")).toContain("<svg");
    const png = readFileSync(pngOut);
    expect(png.subarray(1, 4).toString()).toBe("PNG");
  });

  it("exits nonzero on schema mismatch and empty csv", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const empty = join(dir, "empty.csv");
    writeFileSync(empty, "");
    const code = main([
      "render", "--kind", "PhaseDiagram", "--in", empty,
      "--out", join(dir, "x.svg"),
    ]);
    expect(code).toBe(1);
  });

  it("WeibullTails uses the default grid without --in", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const out = join(dir, "tails.svg");
    expect(main(["render", "--kind", "WeibullTails", "--out", out])).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("polyline");
  });
});

describe("cli argument parsing", () => {
  it("parses a full command line", () => {
    const spec = parseArgs([
      "render", "--kind", "RatioCurve", "--in", "a.csv", "--out", "b.svg",
      "--band-low", "0.15", "--band-high", "2",
    ]);
    expect(spec.kind).toBe("RatioCurve");
    expect(spec.bandLow).toBeCloseTo(0.15);
  });

  it("rejects unknown kinds and missing flags", () => {
    expect(() => parseArgs(["render", "--kind", "Pie", "--out", "x.svg"])).toThrow();
    expect(() => parseArgs(["render", "--kind", "RatioCurve"])).toThrow(/--out/);
    expect(() => parseArgs(["plot"])).toThrow(/usage/);
  });

  it("validates the optional grid csv for WeibullTails", () => {
    expect(() => parseCsv("p,gamma\n1.5,1", GridRow)).toThrow(SchemaError);
    expect(parseCsv("p,gamma\n0.5,1", GridRow)[0].p).toBe(0.5);
  });
});
