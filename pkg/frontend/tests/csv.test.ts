import { readFileSync } from "fs";
import { describe, expect, it } from "vitest";

import { labelFromPath, parseCdfCsv, parseSweepCsv, SchemaError } from "../src/csv.js";

const FIXTURE = new URL("./fixtures/cdf_se_max_power.csv", import.meta.url);

describe("parseCdfCsv", () => {
  it("parses real simulator output", () => {
    const series = parseCdfCsv(readFileSync(FIXTURE, "utf-8"), "cdf_se_max_power.csv");
    expect(series.label).toBe("cdf_se_max_power");
    expect(series.points.length).toBe(800);
    expect(series.points[series.points.length - 1]!.cdf).toBe(1);
    for (let i = 1; i < series.points.length; i++) {
      expect(series.points[i]!.value).toBeGreaterThanOrEqual(
        series.points[i - 1]!.value,
      );
      expect(series.points[i]!.cdf).toBeGreaterThan(series.points[i - 1]!.cdf);
    }
  });

  it("accepts a one-point distribution", () => {
    const s = parseCdfCsv("value,cdf\n1,1.0\n", "one.csv");
    expect(s.points).toEqual([{ value: 1, cdf: 1 }]);
  });

  it("keeps duplicate values (vertical steps)", () => {
    const s = parseCdfCsv("value,cdf\n2,0.5\n2,1\n", "dup.csv");
    expect(s.points.length).toBe(2);
  });

  it.each([
    ["missing header", "vals,cdf\n1,1\n", /expected header/],
    ["no rows", "value,cdf\n", /no data rows/],
    ["wrong arity", "value,cdf\n1,0.5,9\n2,1\n", /expected 2 columns/],
    ["non-numeric", "value,cdf\nx,1\n", /not a number/],
    ["non-finite value", "value,cdf\nInfinity,1\n", /finite/],
    ["decreasing values", "value,cdf\n2,0.5\n1,1\n", /non-decreasing/],
    ["flat cdf", "value,cdf\n1,0.5\n2,0.5\n3,1\n", /strictly increasing/],
    ["decreasing cdf", "value,cdf\n1,0.7\n2,0.4\n3,1\n", /strictly increasing/],
    ["cdf above 1", "value,cdf\n1,0.5\n2,1.2\n", /in \(0, 1\]/],
    ["cdf at 0", "value,cdf\n1,0\n2,1\n", /in \(0, 1\]/],
    ["does not end at 1", "value,cdf\n1,0.4\n2,0.9\n", /end exactly at 1/],
  ])("rejects %s", (_name, text, pattern) => {
    expect(() => parseCdfCsv(text, "bad.csv")).toThrow(SchemaError);
    expect(() => parseCdfCsv(text, "bad.csv")).toThrow(pattern);
  });

  it("reports the offending line number", () => {
    expect(() =>
      parseCdfCsv("value,cdf\n1,0.3\n2,0.2\n3,1\n", "bad.csv"),
    ).toThrow(/bad\.csv:3/);
  });
});

describe("parseSweepCsv", () => {
  const fixture = readFileSync(
    new URL("./fixtures/sweep.csv", import.meta.url),
    "utf-8",
  );

  it("parses real simulator output", () => {
    const rows = parseSweepCsv(fixture, "sweep.csv");
    expect(rows.length).toBe(36); // 4 caps x 3 circuit powers x 3 algorithms
    const algorithms = new Set(rows.map((r) => r.algorithm));
    expect(algorithms).toEqual(
      new Set(["max_power", "max_min_se", "max_min_ee"]),
    );
    for (const r of rows) {
      expect(Number.isFinite(r.medianSe)).toBe(true);
      expect(Number.isFinite(r.medianEe)).toBe(true);
    }
  });

  it("parses nan medians as NaN", () => {
    const rows = parseSweepCsv(
      "p_bar_w,p_u_w,algorithm,median_se,median_ee\n0.1,0.1,max_min_ee,nan,nan\n",
      "s.csv",
    );
    expect(rows[0]!.medianSe).toBeNaN();
  });

  it.each([
    ["bad header", "a,b,c,d,e\n1,1,x,1,1\n", /expected header/],
    ["empty table", "p_bar_w,p_u_w,algorithm,median_se,median_ee\n", /no data rows/],
    ["short row", "p_bar_w,p_u_w,algorithm,median_se,median_ee\n0.1,0.1,mp,3\n", /5 columns/],
    ["blank algorithm", "p_bar_w,p_u_w,algorithm,median_se,median_ee\n0.1,0.1,,3,4\n", /empty algorithm/],
    ["infinite median", "p_bar_w,p_u_w,algorithm,median_se,median_ee\n0.1,0.1,mp,Infinity,4\n", /finite or nan/],
  ])("rejects %s", (_name, text, pattern) => {
    expect(() => parseSweepCsv(text, "s.csv")).toThrow(SchemaError);
    expect(() => parseSweepCsv(text, "s.csv")).toThrow(pattern);
  });
});

describe("labelFromPath", () => {
  it("strips directories and the extension", () => {
    expect(labelFromPath("out/desk/cdf_se_max_power.csv")).toBe(
      "cdf_se_max_power",
    );
    expect(labelFromPath("plain")).toBe("plain");
  });
});
