/** Tiny flag parser shared by the two figure commands. */

import type { Metric } from "./chart.js";

export class UsageError extends Error {}

export interface FigureArgs {
  metric: Metric;
  scale: number;
  out: string;
  inputs: string[];
}

export function parseArgs(argv: string[], usage: string): FigureArgs {
  let metric: string | undefined;
  let scale = 1;
  let out: string | undefined;
  const inputs: string[] = [];

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    const next = (): string => {
      const v = argv[++i];
      if (v === undefined) throw new UsageError(`${arg} needs a value`);
      return v;
    };
    switch (arg) {
      case "--metric":
        metric = next();
        break;
      case "--scale": {
        const raw = next();
        scale = Number(raw);
        if (!Number.isFinite(scale) || scale <= 0) {
          throw new UsageError(`--scale must be a positive number, got '${raw}'`);
        }
        break;
      }
      case "--out":
        out = next();
        break;
      case "--help":
      case "-h":
        throw new UsageError(usage);
      default:
        if (arg.startsWith("-")) throw new UsageError(`unknown flag ${arg}`);
        inputs.push(arg);
    }
  }

  if (metric !== "se" && metric !== "ee") {
    throw new UsageError("--metric must be 'se' or 'ee'");
  }
  if (out === undefined) throw new UsageError("--out is required");
  if (inputs.length === 0) throw new UsageError(`no input files\n${usage}`);
  return { metric, scale, out, inputs };
}
