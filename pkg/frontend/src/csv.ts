/**
 * Readers for the simulator's CSV outputs.
 *
 * Both readers validate the documented schemas and throw SchemaError
 * with a file:line position on the first violation, so a malformed or
 * hand-edited file never renders silently.
 */

export class SchemaError extends Error {}

export interface CdfPoint {
  value: number;
  cdf: number;
}

export interface CdfSeries {
  /** Legend label, derived from the file name. */
  label: string;
  points: CdfPoint[];
}

export interface SweepRow {
  pBarW: number;
  pUW: number;
  algorithm: string;
  medianSe: number; // NaN when every solve at the grid point failed
  medianEe: number;
}

const CDF_HEADER = "value,cdf";
const SWEEP_HEADER = "p_bar_w,p_u_w,algorithm,median_se,median_ee";

function splitLines(text: string): string[] {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  return lines;
}

function numberAt(raw: string, where: string): number {
  const v = Number(raw);
  if (raw.trim() === "" || Number.isNaN(v)) {
    throw new SchemaError(`${where}: not a number: '${raw}'`);
  }
  return v;
}

/** Parse one `value,cdf` file and enforce the distribution invariants:
 * values non-decreasing, probabilities strictly increasing within
 * (0, 1] and ending exactly at 1. */
export function parseCdfCsv(text: string, name: string): CdfSeries {
  const lines = splitLines(text);
  if (lines.length === 0 || lines[0] !== CDF_HEADER) {
    throw new SchemaError(`${name}:1: expected header '${CDF_HEADER}'`);
  }
  if (lines.length < 2) {
    throw new SchemaError(`${name}: no data rows`);
  }
  const points: CdfPoint[] = [];
  for (let i = 1; i < lines.length; i++) {
    const where = `${name}:${i + 1}`;
    const cells = lines[i]!.split(",");
    if (cells.length !== 2) {
      throw new SchemaError(`${where}: expected 2 columns`);
    }
    const value = numberAt(cells[0]!, where);
    const cdf = numberAt(cells[1]!, where);
    if (!Number.isFinite(value)) {
      throw new SchemaError(`${where}: value must be finite`);
    }
    if (!(cdf > 0 && cdf <= 1)) {
      throw new SchemaError(`${where}: cdf must be in (0, 1]`);
    }
    const prev = points[points.length - 1];
    if (prev !== undefined) {
      if (value < prev.value) {
        throw new SchemaError(`${where}: values must be non-decreasing`);
      }
      if (cdf <= prev.cdf) {
        throw new SchemaError(`${where}: cdf must be strictly increasing`);
      }
    }
    points.push({ value, cdf });
  }
  const last = points[points.length - 1]!;
  if (last.cdf !== 1) {
    throw new SchemaError(`${name}: cdf must end exactly at 1, got ${last.cdf}`);
  }
  return { label: labelFromPath(name), points };
}

/** Parse the sweep median table. Rows where every solve failed carry
 * literal `nan` medians; they parse to NaN and the chart drops them. */
export function parseSweepCsv(text: string, name: string): SweepRow[] {
  const lines = splitLines(text);
  if (lines.length === 0 || lines[0] !== SWEEP_HEADER) {
    throw new SchemaError(`${name}:1: expected header '${SWEEP_HEADER}'`);
  }
  if (lines.length < 2) {
    throw new SchemaError(`${name}: no data rows`);
  }
  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const where = `${name}:${i + 1}`;
    const cells = lines[i]!.split(",");
    if (cells.length !== 5) {
      throw new SchemaError(`${where}: expected 5 columns`);
    }
    const pBarW = numberAt(cells[0]!, where);
    const pUW = numberAt(cells[1]!, where);
    if (!Number.isFinite(pBarW) || !Number.isFinite(pUW)) {
      throw new SchemaError(`${where}: grid coordinates must be finite`);
    }
    const algorithm = cells[2]!;
    if (algorithm === "") {
      throw new SchemaError(`${where}: empty algorithm name`);
    }
    // medians: finite, or nan for an all-infeasible grid point
    const medianSe = parseMedian(cells[3]!, where);
    const medianEe = parseMedian(cells[4]!, where);
    rows.push({ pBarW, pUW, algorithm, medianSe, medianEe });
  }
  return rows;
}

function parseMedian(raw: string, where: string): number {
  if (raw.trim() === "nan") return NaN;
  const v = numberAt(raw, where);
  if (!Number.isFinite(v)) {
    throw new SchemaError(`${where}: median must be finite or nan`);
  }
  return v;
}

export function labelFromPath(p: string): string {
  const base = p.split("/").pop() ?? p;
  return base.replace(/\.csv$/i, "");
}
