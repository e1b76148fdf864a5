#!/usr/bin/env node
/**
 * CLI: `render --kind <k> --csv <in> --out <png>`.
 */

import { KINDS, render, type FigureKind } from "./render.js";

const USAGE = `usage: modfold-plots render --kind <${KINDS.join("|")}> --csv <in.csv> --out <out.png>`;

function parseArgs(argv: string[]): { kind: FigureKind; csv: string; out: string } {
  if (argv[0] !== "render") {
    throw new Error(USAGE);
  }
  const opts = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--") || value === undefined) {
      throw new Error(USAGE);
    }
    opts.set(flag.slice(2), value);
  }
  const kind = opts.get("kind");
  const csv = opts.get("csv");
  const out = opts.get("out");
  if (!kind || !csv || !out) {
    throw new Error(USAGE);
  }
  if (!(KINDS as readonly string[]).includes(kind)) {
    throw new Error(`unknown kind '${kind}'; expected one of ${KINDS.join(", ")}`);
  }
  return { kind: kind as FigureKind, csv, out };
}

export function main(argv: string[]): number {
  try {
    const { kind, csv, out } = parseArgs(argv);
    render({ kind, csvPath: csv, outPath: out });
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
