import { readFileSync } from "fs";
import { describe, expect, it } from "vitest";

import { axisUnit, renderCdfChart, renderSweepChart } from "../src/chart.js";
import { parseCdfCsv, parseSweepCsv } from "../src/csv.js";

function fixture(name: string): string {
  return readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8");
}

const countCurves = (svg: string) => (svg.match(/<polyline/g) ?? []).length;

describe("axisUnit", () => {
  it("names the base units", () => {
    expect(axisUnit("se", 1)).toBe("bits/s/Hz");
    expect(axisUnit("ee", 1)).toBe("bits/J");
  });

  it("applies the SI prefix for known scales", () => {
    expect(axisUnit("ee", 1e-9)).toBe("Gbit/J");
    expect(axisUnit("ee", 1e-6)).toBe("Mbit/J");
  });

  it("falls back to an explicit factor otherwise", () => {
    expect(axisUnit("ee", 0.5)).toBe("bits/J x 2");
  });
});

describe("renderCdfChart", () => {
  it("renders a one-point series", () => {
    const s = parseCdfCsv("value,cdf\n1,1.0\n", "one.csv");
    const svg = renderCdfChart([s], "se", 1);
    expect(svg).toContain("<svg");
    expect(svg).toContain("</svg>");
    expect(countCurves(svg)).toBe(1);
  });

  it("draws one curve and one legend entry per input", () => {
    const series = [
      "cdf_se_max_power.csv",
      "cdf_se_max_min_se.csv",
      "cdf_se_max_min_ee.csv",
    ].map((n) => parseCdfCsv(fixture(n), n));
    const svg = renderCdfChart(series, "se", 1);
    expect(countCurves(svg)).toBe(3);
    expect(svg).toContain(">cdf_se_max_power<");
    expect(svg).toContain(">cdf_se_max_min_se<");
    expect(svg).toContain(">cdf_se_max_min_ee<");
  });

  it("labels both axes", () => {
    const s = parseCdfCsv(fixture("cdf_ee_max_power.csv"), "cdf_ee_max_power.csv");
    const svg = renderCdfChart([s], "ee", 1e-9);
    expect(svg).toContain("EE (Gbit/J)");
    expect(svg).toContain(">CDF<");
  });

  it("is a pure function of its inputs", () => {
    const s = parseCdfCsv(fixture("cdf_se_max_power.csv"), "a.csv");
    const first = renderCdfChart([s], "se", 1);
    const second = renderCdfChart([s], "se", 1);
    expect(second).toBe(first);
  });

  it("steps monotonically in x", () => {
    const s = parseCdfCsv(fixture("cdf_se_max_min_se.csv"), "a.csv");
    const svg = renderCdfChart([s], "se", 1);
    const match = svg.match(/points="([^"]+)"/);
    const xs = match![1]!.split(" ").map((p) => Number(p.split(",")[0]));
    for (let i = 1; i < xs.length; i++) {
      expect(xs[i]!).toBeGreaterThanOrEqual(xs[i - 1]!);
    }
  });
});

describe("renderSweepChart", () => {
  const rows = parseSweepCsv(fixture("sweep.csv"), "sweep.csv");

  it("draws one curve per (algorithm, circuit power) pair", () => {
    const twoByTwo = rows.filter(
      (r) =>
        (r.algorithm === "max_power" || r.algorithm === "max_min_ee") &&
        (r.pUW === 0.05 || r.pUW === 0.2),
    );
    const svg = renderSweepChart(twoByTwo, "se", 1);
    expect(countCurves(svg)).toBe(4);
  });

  it("labels the y axis with the scaled unit", () => {
    const svg = renderSweepChart(rows, "ee", 1e-9);
    expect(svg).toContain("Median EE (Gbit/J)");
    expect(svg).toContain("Power cap (W)");
  });

  it("drops nan medians but keeps the rest", () => {
    const patched = rows.slice();
    patched[0] = { ...patched[0]!, medianSe: NaN };
    const svg = renderSweepChart(patched, "se", 1);
    expect(countCurves(svg)).toBe(9);
  });

  it("rejects a table with nothing finite", () => {
    const allNan = rows.map((r) => ({ ...r, medianEe: NaN }));
    expect(() => renderSweepChart(allNan, "ee", 1)).toThrow(/no finite medians/);
  });
});
