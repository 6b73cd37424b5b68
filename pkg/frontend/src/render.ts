import { readFileSync, writeFileSync } from "node:fs";

import { Resvg } from "@resvg/resvg-js";

import {
  DEFAULT_GRID,
  phaseDiagram,
  ratioCurve,
  sweepHeatmap,
  weibullTails,
} from "./charts.js";
import { SchemaError, parseCsv } from "./csv.js";
import { FigureSpec, GridRow, SweepRow, TailRow } from "./schemas.js";

export function renderSvg(spec: FigureSpec): string {
  const read = () => {
    if (spec.inputCsv === null) {
      throw new SchemaError(`--in is required for kind ${spec.kind}`);
    }
    return readFileSync(spec.inputCsv, "utf-8");
  };
  switch (spec.kind) {
    case "WeibullTails": {
      const grid =
        spec.inputCsv === null ? DEFAULT_GRID : parseCsv(read(), GridRow);
      return weibullTails(grid);
    }
    case "PhaseDiagram":
      return phaseDiagram(parseCsv(read(), SweepRow));
    case "SweepHeatmap":
      return sweepHeatmap(parseCsv(read(), SweepRow));
    case "RatioCurve":
      return ratioCurve(parseCsv(read(), TailRow), spec.bandLow, spec.bandHigh);
  }
}

export function render(spec: FigureSpec): void {
  const svg = renderSvg(spec);
  if (spec.outputImage.endsWith(".png")) {
    const png = new Resvg(svg, { fitTo: { mode: "original" } }).render().asPng();
    writeFileSync(spec.outputImage, png);
  } else if (spec.outputImage.endsWith(".svg")) {
    writeFileSync(spec.outputImage, svg);
  } else {
    throw new SchemaError(`output must end in .svg or .png: ${spec.outputImage}`);
  }
}
