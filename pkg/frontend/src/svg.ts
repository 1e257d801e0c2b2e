/**
 * Self-contained SVG renderer for one figure (no DOM, no chart library:
 * the output must be a pure deterministic function of the data).
 *
 * Each curve group carries its raw data in a `data-points` attribute so
 * the plotted series stay machine-checkable against the source CSV.
 */

import { Curve, FigureData } from "./curves.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 24, bottom: 56, left: 72 };

const PALETTE: Record<string, string> = {
  xy: "#1f77b4",
  west_first: "#ff7f0e",
  odd_even: "#2ca02c",
  "tfar+bus": "#d62728",
};
const FALLBACK_COLORS = ["#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

function color(routing: string, i: number): string {
  return PALETTE[routing] ?? FALLBACK_COLORS[i % FALLBACK_COLORS.length];
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/"/g, "&quot;");
}

function fmt(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (hi === lo) hi = lo + 1;
  const f = ((v: number) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  const step = niceStep(hi - lo);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12; t += step) {
    ticks.push(Number(t.toPrecision(8)));
  }
  f.ticks = ticks;
  return f;
}

function niceStep(span: number): number {
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const n = raw / mag;
  return (n < 1.5 ? 1 : n < 3.5 ? 2 : n < 7.5 ? 5 : 10) * mag;
}

/** Y-axis ceiling: saturated latency points are excluded so the knees of
 * the unsaturated curves stay readable (the stated autoscale rule). */
function yCeiling(fig: FigureData): number {
  let hi = 0;
  for (const c of fig.curves) {
    for (const p of c.points) {
      if (fig.metric === "latency" && p.saturated) continue;
      hi = Math.max(hi, p.max);
    }
  }
  if (hi === 0) {
    for (const c of fig.curves) for (const p of c.points) hi = Math.max(hi, p.max);
  }
  return hi * 1.05 || 1;
}

function marker(x: number, y: number, col: string, saturated: boolean): string {
  if (!saturated) {
    return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="3.5" fill="${col}"/>`;
  }
  // Saturated points get an open cross so they read as "off the scale".
  const d = 4.5;
  return (
    `<path d="M${fmt(x - d)} ${fmt(y - d)}L${fmt(x + d)} ${fmt(y + d)}` +
    `M${fmt(x - d)} ${fmt(y + d)}L${fmt(x + d)} ${fmt(y - d)}" ` +
    `stroke="${col}" stroke-width="1.8" fill="none"/>`
  );
}

function renderCurve(c: Curve, i: number, xs: Scale, ys: Scale): string {
  const col = color(c.routing, i);
  const parts: string[] = [];
  const line = c.points
    .map((p) => `${fmt(xs(p.pir))},${fmt(ys(p.mean))}`)
    .join(" ");
  parts.push(
    `<polyline points="${line}" fill="none" stroke="${col}" stroke-width="2"/>`,
  );
  for (const p of c.points) {
    const x = xs(p.pir);
    if (p.min !== p.max) {
      parts.push(
        `<line x1="${fmt(x)}" y1="${fmt(ys(p.min))}" x2="${fmt(x)}" ` +
          `y2="${fmt(ys(p.max))}" stroke="${col}" stroke-width="1"/>`,
      );
    }
    parts.push(marker(x, ys(p.mean), col, p.saturated));
  }
  const data = esc(JSON.stringify(c.points));
  return (
    `<g class="curve" data-routing="${esc(c.routing)}" data-points="${data}">` +
    parts.join("") +
    `</g>`
  );
}

export function renderFigure(fig: FigureData): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const pirs = fig.curves.flatMap((c) => c.points.map((p) => p.pir));
  const xLo = Math.min(...pirs, 0);
  const xHi = Math.max(...pirs, 0.01);
  const xs = linearScale(xLo, xHi, MARGIN.left, MARGIN.left + plotW);
  const ys = linearScale(0, yCeiling(fig), MARGIN.top + plotH, MARGIN.top);

  const yLabel =
    fig.metric === "latency"
      ? "average packet latency (cycles)"
      : "throughput (flits/cycle/node)";
  const title = `${yLabel} vs injection rate — ${fig.traffic}`;

  const axes: string[] = [];
  const bottom = MARGIN.top + plotH;
  axes.push(
    `<line x1="${MARGIN.left}" y1="${bottom}" x2="${MARGIN.left + plotW}" ` +
      `y2="${bottom}" stroke="#333"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${bottom}" stroke="#333"/>`,
  );
  for (const t of xs.ticks) {
    const x = xs(t);
    axes.push(
      `<line x1="${fmt(x)}" y1="${bottom}" x2="${fmt(x)}" y2="${bottom + 5}" stroke="#333"/>`,
      `<text x="${fmt(x)}" y="${bottom + 20}" text-anchor="middle" font-size="11">${fmt(t)}</text>`,
    );
  }
  for (const t of ys.ticks) {
    const y = ys(t);
    axes.push(
      `<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="#333"/>`,
      `<text x="${MARGIN.left - 9}" y="${fmt(y + 4)}" text-anchor="end" font-size="11">${fmt(t)}</text>`,
    );
  }
  axes.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-size="13">injection rate (packets/node/cycle)</text>`,
    `<text transform="rotate(-90)" x="${-(MARGIN.top + plotH / 2)}" y="20" text-anchor="middle" font-size="13">${esc(yLabel)}</text>`,
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15" font-weight="bold">${esc(title)}</text>`,
  );

  const legend: string[] = [];
  fig.curves.forEach((c, i) => {
    const y = MARGIN.top + 14 + i * 18;
    const x = MARGIN.left + 12;
    legend.push(
      `<line x1="${x}" y1="${y}" x2="${x + 22}" y2="${y}" stroke="${color(c.routing, i)}" stroke-width="2"/>`,
      `<text x="${x + 28}" y="${y + 4}" font-size="12" class="legend-label">${esc(c.routing)}</text>`,
    );
  });

  const clipped = fig.curves
    .map((c, i) => renderCurve(c, i, xs, ys))
    .join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    axes.join("\n"),
    `<clipPath id="plot"><rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH + 6}"/></clipPath>`,
    `<g clip-path="url(#plot)">`,
    clipped,
    `</g>`,
    legend.join("\n"),
    `</svg>`,
  ].join("\n");
}
