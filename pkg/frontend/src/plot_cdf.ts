#!/usr/bin/env node
/**
 * Overlay empirical CDF curves from one or more `value,cdf` files.
 *
 * Usage:
 *   plot-cdf --metric se --out fig.svg out/cdf_se_*.csv
 *   plot-cdf --metric ee --scale 1e-9 --out ee.svg out/cdf_ee_*.csv
 */

import { readFile, writeFile } from "fs/promises";
import { pathToFileURL } from "url";

import { parseArgs, UsageError } from "./args.js";
import { renderCdfChart } from "./chart.js";
import { parseCdfCsv, SchemaError } from "./csv.js";

const USAGE =
  "usage: plot-cdf --metric se|ee [--scale F] --out FILE csv [csv...]";

export async function run(argv: string[]): Promise<number> {
  try {
    const args = parseArgs(argv, USAGE);
    const series = [];
    for (const path of args.inputs) {
      series.push(parseCdfCsv(await readFile(path, "utf-8"), path));
    }
    const svg = renderCdfChart(series, args.metric, args.scale);
    await writeFile(args.out, svg);
    console.log(`${series.length} series -> ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError || err instanceof SchemaError) {
      console.error(`plot-cdf: ${err.message}`);
    } else {
      console.error(`plot-cdf: ${(err as Error).message ?? err}`);
    }
    return 1;
  }
}

if (import.meta.url === pathToFileURL(process.argv[1] ?? "").href) {
  process.exit(await run(process.argv.slice(2)));
}
