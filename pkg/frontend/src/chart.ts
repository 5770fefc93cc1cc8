/**
 * Hand-rolled SVG charts. No timestamps and no randomness anywhere,
 * so identical inputs give byte-identical files.
 */

import type { CdfSeries, SweepRow } from "./csv.js";

export type Metric = "se" | "ee";

const W = 700;
const H = 400;
const MARGIN = { left: 64, right: 20, top: 30, bottom: 46 };

const PALETTE = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f3722c",
  "#7209b7",
  "#0096c7",
  "#9c6644",
  "#55585c",
];

const BASE_UNIT: Record<Metric, string> = {
  se: "bits/s/Hz",
  ee: "bits/J",
};

const SI_PREFIX: Record<string, string> = {
  "0.001": "k",
  "0.000001": "M",
  "1e-9": "G",
  "1e-12": "T",
};

/** "bits/J" at scale 1e-9 becomes "Gbit/J". */
export function axisUnit(metric: Metric, scale: number): string {
  if (scale === 1) return BASE_UNIT[metric];
  const prefix = SI_PREFIX[String(scale)];
  if (prefix === undefined) {
    return `${BASE_UNIT[metric]} x ${1 / scale}`;
  }
  return prefix + BASE_UNIT[metric].replace(/^bits/, "bit");
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 10000 || a < 0.001) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || Math.abs(min) || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const out: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

interface Frame {
  xOf: (v: number) => number;
  yOf: (v: number) => number;
  body: string[];
}

function openFrame(
  title: string,
  xLabel: string,
  yLabel: string,
  xMin: number,
  xMax: number,
  yMin: number,
  yMax: number,
): Frame {
  const pw = W - MARGIN.left - MARGIN.right;
  const ph = H - MARGIN.top - MARGIN.bottom;
  if (xMax === xMin) {
    // degenerate range (single distinct x): pad symmetrically
    const pad = Math.abs(xMin) || 1;
    xMin -= pad;
    xMax += pad;
  }
  const xOf = (v: number) => MARGIN.left + ((v - xMin) / (xMax - xMin)) * pw;
  const yOf = (v: number) =>
    MARGIN.top + ph - ((v - yMin) / (yMax - yMin || 1)) * ph;

  const body: string[] = [];
  body.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" ` +
      `font-family="Helvetica, Arial, sans-serif">`,
  );
  body.push(`<rect width="${W}" height="${H}" fill="#fff"/>`);
  body.push(
    `<text x="${MARGIN.left}" y="${MARGIN.top - 12}" font-size="13" ` +
      `font-weight="600" fill="#222">${esc(title)}</text>`,
  );

  const xTicks = niceTicks(xMin, xMax, 7).filter((v) => v >= xMin && v <= xMax);
  const yTicks = niceTicks(yMin, yMax, 6).filter((v) => v >= yMin && v <= yMax);
  for (const v of yTicks) {
    const y = yOf(v).toFixed(1);
    body.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${W - MARGIN.right}" y2="${y}" ` +
        `stroke="#eee" stroke-width="0.6"/>`,
    );
    body.push(
      `<text x="${MARGIN.left - 6}" y="${(yOf(v) + 3.5).toFixed(1)}" ` +
        `text-anchor="end" font-size="10" fill="#555">${esc(fmtTick(v))}</text>`,
    );
  }
  for (const v of xTicks) {
    const x = xOf(v).toFixed(1);
    body.push(
      `<line x1="${x}" y1="${MARGIN.top + ph}" x2="${x}" ` +
        `y2="${MARGIN.top + ph + 4}" stroke="#333" stroke-width="0.6"/>`,
    );
    body.push(
      `<text x="${x}" y="${MARGIN.top + ph + 16}" text-anchor="middle" ` +
        `font-size="10" fill="#555">${esc(fmtTick(v))}</text>`,
    );
  }

  body.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${MARGIN.top + ph}" stroke="#333" stroke-width="0.8"/>`,
  );
  body.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top + ph}" ` +
      `x2="${W - MARGIN.right}" y2="${MARGIN.top + ph}" ` +
      `stroke="#333" stroke-width="0.8"/>`,
  );
  body.push(
    `<text x="${MARGIN.left + pw / 2}" y="${H - 8}" text-anchor="middle" ` +
      `font-size="11" fill="#333">${esc(xLabel)}</text>`,
  );
  const yMid = MARGIN.top + ph / 2;
  body.push(
    `<text x="16" y="${yMid}" text-anchor="middle" font-size="11" ` +
      `fill="#333" transform="rotate(-90,16,${yMid})">${esc(yLabel)}</text>`,
  );
  return { xOf, yOf, body };
}

function legend(body: string[], labels: string[]): void {
  const lw = Math.max(...labels.map((l) => l.length)) * 5.6 + 30;
  const lx = W - MARGIN.right - lw - 6;
  let ly = MARGIN.top + 10;
  body.push(
    `<rect x="${lx - 6}" y="${ly - 10}" width="${lw + 10}" ` +
      `height="${labels.length * 14 + 6}" rx="3" fill="#fff" ` +
      `fill-opacity="0.9" stroke="#ddd" stroke-width="0.5"/>`,
  );
  labels.forEach((label, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    body.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 16}" y2="${ly}" ` +
        `stroke="${color}" stroke-width="2"/>`,
    );
    body.push(
      `<text x="${lx + 21}" y="${ly + 3.5}" font-size="10" ` +
        `fill="#333">${esc(label)}</text>`,
    );
    ly += 14;
  });
}

/** Empirical CDF staircase overlay, one curve per series. */
export function renderCdfChart(
  seriesList: CdfSeries[],
  metric: Metric,
  scale: number,
): string {
  const scaled = seriesList.map((s) => ({
    label: s.label,
    points: s.points.map((p) => ({ value: p.value * scale, cdf: p.cdf })),
  }));
  const values = scaled.flatMap((s) => s.points.map((p) => p.value));
  const xMin = Math.min(...values);
  const xMax = Math.max(...values);
  const unit = axisUnit(metric, scale);
  const frame = openFrame(
    `Per-UE ${metric.toUpperCase()} distribution`,
    `${metric.toUpperCase()} (${unit})`,
    "CDF",
    xMin,
    xMax,
    0,
    1,
  );

  scaled.forEach((s, idx) => {
    const color = PALETTE[idx % PALETTE.length]!;
    const pts: string[] = [];
    const first = s.points[0]!;
    // staircase: rise at each sample value, flat in between
    pts.push(`${frame.xOf(first.value).toFixed(1)},${frame.yOf(0).toFixed(1)}`);
    let prevCdf = 0;
    for (const p of s.points) {
      const x = frame.xOf(p.value).toFixed(1);
      pts.push(`${x},${frame.yOf(prevCdf).toFixed(1)}`);
      pts.push(`${x},${frame.yOf(p.cdf).toFixed(1)}`);
      prevCdf = p.cdf;
    }
    frame.body.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.6" ` +
        `points="${pts.join(" ")}"/>`,
    );
  });

  legend(frame.body, scaled.map((s) => s.label));
  frame.body.push("</svg>");
  return frame.body.join("\n") + "\n";
}

/** Median metric vs the power cap, one curve per (algorithm, p_u_w). */
export function renderSweepChart(
  rows: SweepRow[],
  metric: Metric,
  scale: number,
): string {
  const pick = (r: SweepRow) =>
    (metric === "se" ? r.medianSe : r.medianEe) * scale;
  const usable = rows.filter((r) => Number.isFinite(pick(r)));
  if (usable.length === 0) {
    throw new Error("sweep table has no finite medians to plot");
  }

  const groups = new Map<string, SweepRow[]>();
  for (const r of usable) {
    const key = `${r.algorithm}, P_U=${r.pUW} W`;
    const bucket = groups.get(key);
    if (bucket === undefined) groups.set(key, [r]);
    else bucket.push(r);
  }
  const labels = [...groups.keys()].sort();

  const xs = usable.map((r) => r.pBarW);
  const ys = usable.map(pick);
  const yMin = Math.min(...ys, 0);
  const yMax = Math.max(...ys) * 1.05;
  const unit = axisUnit(metric, scale);
  const frame = openFrame(
    `Median ${metric.toUpperCase()} vs power cap`,
    "Power cap (W)",
    `Median ${metric.toUpperCase()} (${unit})`,
    Math.min(...xs),
    Math.max(...xs),
    yMin,
    yMax,
  );

  labels.forEach((label, idx) => {
    const color = PALETTE[idx % PALETTE.length]!;
    const pts = groups
      .get(label)!
      .slice()
      .sort((a, b) => a.pBarW - b.pBarW)
      .map((r) => `${frame.xOf(r.pBarW).toFixed(1)},${frame.yOf(pick(r)).toFixed(1)}`);
    frame.body.push(
      `<polyline fill="none" stroke="${color}" stroke-width="1.6" ` +
        `points="${pts.join(" ")}"/>`,
    );
  });

  legend(frame.body, labels);
  frame.body.push("</svg>");
  return frame.body.join("\n") + "\n";
}
