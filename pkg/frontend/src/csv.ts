/**
 * Sweep-CSV reader. The file format is the simulator's "busnoc sweep csv
 * v1": `#` comment lines, a header row, then one row per
 * (routing, traffic, pir, seed) cell. Columns are looked up by name so
 * column reordering is harmless and a missing column fails loudly.
 */

export interface SweepRow {
  routing: string;
  traffic: string;
  pir: number;
  seed: number;
  avgLatency: number | null;
  maxLatency: number | null;
  throughput: number | null;
  saturated: boolean;
  error: string;
}

const REQUIRED = [
  "routing",
  "traffic",
  "pir",
  "seed",
  "avg_latency_cycles",
  "max_latency_cycles",
  "throughput_flits_per_cycle_per_node",
  "saturated",
  "error",
];

function num(field: string): number | null {
  return field === "" ? null : Number(field);
}

export function parseSweepCsv(text: string): SweepRow[] {
  const lines = text
    .split(/\r?\n/)
    .filter((l) => l.trim() !== "" && !l.startsWith("#"));
  if (lines.length === 0) return [];
  const header = lines[0].split(",");
  const col: Record<string, number> = {};
  header.forEach((name, i) => (col[name] = i));
  for (const name of REQUIRED) {
    if (!(name in col)) {
      throw new Error(`sweep CSV is missing required column '${name}'`);
    }
  }
  return lines.slice(1).map((line, i) => {
    const f = line.split(",");
    if (f.length !== header.length) {
      throw new Error(
        `row ${i + 1} has ${f.length} fields, expected ${header.length}`,
      );
    }
    return {
      routing: f[col["routing"]],
      traffic: f[col["traffic"]],
      pir: Number(f[col["pir"]]),
      seed: Number(f[col["seed"]]),
      avgLatency: num(f[col["avg_latency_cycles"]]),
      maxLatency: num(f[col["max_latency_cycles"]]),
      throughput: num(f[col["throughput_flits_per_cycle_per_node"]]),
      saturated: f[col["saturated"]] === "true",
      error: f[col["error"]],
    };
  });
}
