/**
 * End-to-end: consumes the benchmark sweep CSV produced by the simulator's
 * acceptance suite and checks the emitted figures — 3 traffic patterns x
 * {latency, throughput}, four labelled curves each, with the plotted
 * series matching the CSV values exactly.
 */

import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { parseSweepCsv, SweepRow } from "../src/csv.js";
import { render } from "../src/render.js";

const FIXTURE = fileURLToPath(new URL("fixtures/sweep.csv", import.meta.url));
const ROUTINGS = ["odd_even", "tfar+bus", "west_first", "xy"];
const TRAFFICS = ["bit_reversal", "butterfly", "transpose1"];

let outDir: string;
let written: string[];
let rows: SweepRow[];

beforeAll(() => {
  outDir = mkdtempSync(join(tmpdir(), "busnoc-plots-"));
  written = render(FIXTURE, outDir);
  rows = parseSweepCsv(readFileSync(FIXTURE, "utf8"));
});

afterAll(() => {
  rmSync(outDir, { recursive: true, force: true });
});

function seriesOf(svg: string): Map<string, any[]> {
  const out = new Map<string, any[]>();
  for (const m of svg.matchAll(/data-routing="([^"]*)" data-points="([^"]*)"/g)) {
    out.set(m[1], JSON.parse(m[2].replace(/&quot;/g, '"')));
  }
  return out;
}

function expected(traffic: string, routing: string, metric: string) {
  const cells = new Map<number, number[]>();
  const sat = new Map<number, boolean>();
  for (const r of rows) {
    if (r.traffic !== traffic || r.routing !== routing || r.error !== "") continue;
    const v = metric === "latency" ? r.avgLatency : r.throughput;
    if (v === null) continue;
    (cells.get(r.pir) ?? cells.set(r.pir, []).get(r.pir)!).push(v);
    sat.set(r.pir, (sat.get(r.pir) ?? false) || r.saturated);
  }
  return [...cells.keys()]
    .sort((a, b) => a - b)
    .map((pir) => {
      const vals = cells.get(pir)!;
      return {
        pir,
        mean: vals.reduce((a, b) => a + b, 0) / vals.length,
        min: Math.min(...vals),
        max: Math.max(...vals),
        saturated: sat.get(pir)!,
      };
    });
}

describe("render (sweep CSV -> figures)", () => {
  it("emits six figures: 3 patterns x {latency, throughput}", () => {
    expect(written.length).toBe(6);
    for (const traffic of TRAFFICS) {
      for (const metric of ["latency", "throughput"]) {
        expect(written).toContain(join(outDir, `${traffic}_${metric}.svg`));
      }
    }
  });

  it("draws four labelled curves in every figure", () => {
    for (const path of written) {
      const svg = readFileSync(path, "utf8");
      const series = seriesOf(svg);
      expect([...series.keys()].sort()).toEqual(ROUTINGS);
      const labels = [...svg.matchAll(/class="legend-label">([^<]*)</g)].map(
        (m) => m[1],
      );
      expect(labels.sort()).toEqual(ROUTINGS);
    }
  });

  it("plots series that match the CSV values exactly", () => {
    for (const traffic of TRAFFICS) {
      for (const metric of ["latency", "throughput"]) {
        const svg = readFileSync(
          join(outDir, `${traffic}_${metric}.svg`),
          "utf8",
        );
        const series = seriesOf(svg);
        for (const routing of ROUTINGS) {
          expect(series.get(routing)).toEqual(expected(traffic, routing, metric));
        }
      }
    }
  });

  it("is a pure function of the CSV", () => {
    const again = mkdtempSync(join(tmpdir(), "busnoc-plots-"));
    try {
      render(FIXTURE, again);
      for (const path of written) {
        const name = path.slice(outDir.length + 1);
        expect(readFileSync(join(again, name), "utf8")).toBe(
          readFileSync(path, "utf8"),
        );
      }
    } finally {
      rmSync(again, { recursive: true, force: true });
    }
  });
});
