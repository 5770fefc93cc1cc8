#!/usr/bin/env node
/**
 * Plot the median SE or EE against the power cap, one curve per
 * (algorithm, circuit power) pair from a sweep table.
 *
 * Usage:
 *   plot-sweep --metric ee --scale 1e-9 --out fig.svg sweep.csv
 */

import { readFile, writeFile } from "fs/promises";
import { pathToFileURL } from "url";

import { parseArgs, UsageError } from "./args.js";
import { renderSweepChart } from "./chart.js";
import { parseSweepCsv, SchemaError } from "./csv.js";

const USAGE = "usage: plot-sweep --metric se|ee [--scale F] --out FILE sweep.csv";

export async function run(argv: string[]): Promise<number> {
  try {
    const args = parseArgs(argv, USAGE);
    if (args.inputs.length !== 1) {
      throw new UsageError("plot-sweep takes exactly one sweep table");
    }
    const path = args.inputs[0]!;
    const rows = parseSweepCsv(await readFile(path, "utf-8"), path);
    const svg = renderSweepChart(rows, args.metric, args.scale);
    await writeFile(args.out, svg);
    console.log(`${rows.length} rows -> ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError || err instanceof SchemaError) {
      console.error(`plot-sweep: ${err.message}`);
    } else {
      console.error(`plot-sweep: ${(err as Error).message ?? err}`);
    }
    return 1;
  }
}

if (import.meta.url === pathToFileURL(process.argv[1] ?? "").href) {
  process.exit(await run(process.argv.slice(2)));
}
