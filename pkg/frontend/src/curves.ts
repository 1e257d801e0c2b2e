/**
 * Aggregates sweep rows into plottable curves: one curve per routing
 * algorithm per traffic pattern, one point per injection rate. Seeds
 * collapse to the mean with min/max whiskers; a point is flagged
 * saturated when any seed saturated, and saturated points are excluded
 * from latency-axis autoscaling by the renderer.
 */

import { SweepRow } from "./csv.js";

export type Metric = "latency" | "throughput";

export interface CurvePoint {
  pir: number;
  mean: number;
  min: number;
  max: number;
  saturated: boolean;
}

export interface Curve {
  routing: string;
  points: CurvePoint[]; // sorted by pir
}

export interface FigureData {
  traffic: string;
  metric: Metric;
  curves: Curve[];
}

function value(row: SweepRow, metric: Metric): number | null {
  return metric === "latency" ? row.avgLatency : row.throughput;
}

export function buildFigure(
  rows: SweepRow[],
  traffic: string,
  metric: Metric,
): FigureData {
  const byRouting = new Map<string, Map<number, SweepRow[]>>();
  for (const row of rows) {
    if (row.traffic !== traffic || row.error !== "") continue;
    let byPir = byRouting.get(row.routing);
    if (!byPir) byRouting.set(row.routing, (byPir = new Map()));
    const cell = byPir.get(row.pir);
    if (cell) cell.push(row);
    else byPir.set(row.pir, [row]);
  }
  const curves: Curve[] = [];
  for (const routing of [...byRouting.keys()].sort()) {
    const points: CurvePoint[] = [];
    const byPir = byRouting.get(routing)!;
    for (const pir of [...byPir.keys()].sort((a, b) => a - b)) {
      const vals = byPir
        .get(pir)!
        .map((r) => value(r, metric))
        .filter((v): v is number => v !== null);
      if (vals.length === 0) continue;
      points.push({
        pir,
        mean: vals.reduce((a, b) => a + b, 0) / vals.length,
        min: Math.min(...vals),
        max: Math.max(...vals),
        saturated: byPir.get(pir)!.some((r) => r.saturated),
      });
    }
    if (points.length > 0) curves.push({ routing, points });
  }
  return { traffic, metric, curves };
}

export function trafficsIn(rows: SweepRow[]): string[] {
  return [...new Set(rows.map((r) => r.traffic))].sort();
}
