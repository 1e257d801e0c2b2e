/**
 * render(csv, outDir): one latency figure and one throughput figure per
 * traffic pattern found in the sweep CSV. Pure function of the input
 * file; the CSV is never modified.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { parseSweepCsv } from "./csv.js";
import { buildFigure, Metric, trafficsIn } from "./curves.js";
import { renderFigure } from "./svg.js";

const METRICS: Metric[] = ["latency", "throughput"];

export function render(csvPath: string, outDir: string): string[] {
  const rows = parseSweepCsv(readFileSync(csvPath, "utf8"));
  if (rows.length === 0) {
    console.warn(`warning: ${csvPath} contains no data rows; nothing to do`);
    return [];
  }
  mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  for (const traffic of trafficsIn(rows)) {
    for (const metric of METRICS) {
      const fig = buildFigure(rows, traffic, metric);
      const path = join(outDir, `${traffic}_${metric}.svg`);
      writeFileSync(path, renderFigure(fig) + "\n");
      written.push(path);
    }
  }
  return written;
}
