#!/usr/bin/env node
import { KINDS, FigureSpec, Kind } from "./schemas.js";
import { render } from "./render.js";

const USAGE =
  "usage: frogmodel-plots render --kind <WeibullTails|PhaseDiagram|RatioCurve|SweepHeatmap> " +
  "[--in data.csv] --out figure.{svg,png} [--band-low x --band-high x]";

export function parseArgs(argv: string[]): FigureSpec {
  if (argv[0] !== "render") {
    throw new Error(USAGE);
  }
  const flags = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const key = argv[i];
    const val = argv[i + 1];
    if (!key.startsWith("--") || val === undefined) {
      throw new Error(USAGE);
    }
    flags.set(key.slice(2), val);
  }
  const kind = flags.get("kind");
  const out = flags.get("out");
  if (!kind || !(KINDS as readonly string[]).includes(kind)) {
    throw new Error(`--kind must be one of ${KINDS.join(", ")}`);
  }
  if (!out) {
    throw new Error("--out is required");
  }
  const num = (name: string): number | undefined => {
    const raw = flags.get(name);
    if (raw === undefined) return undefined;
    const v = Number(raw);
    if (!Number.isFinite(v)) throw new Error(`--${name} must be a number`);
    return v;
  };
  return {
    kind: kind as Kind,
    inputCsv: flags.get("in") ?? null,
    outputImage: out,
    bandLow: num("band-low"),
    bandHigh: num("band-high"),
  };
}

export function main(argv: string[]): number {
  try {
    render(parseArgs(argv));
    return 0;
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
