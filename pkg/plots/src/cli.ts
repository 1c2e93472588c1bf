#!/usr/bin/env node
/**
 * Flags mirror PlotSpec one to one:
 *
 *   --kind convergence --input trace_a.csv trace_b.csv --arms a b \
 *       --out convergence.svg
 *   --kind power_sweep --input aggregate.csv --arms fixed pso exhaustive \
 *       --out power_sweep.svg
 */

import { pathToFileURL } from "node:url";
import yargs from "yargs";
import { renderToFile, type FigureKind } from "./figure.js";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .option("kind", {
      choices: ["convergence", "power_sweep"] as const,
      demandOption: true,
      describe: "figure kind",
    })
    .option("input", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "input CSV path(s); one trace per arm, or one aggregate",
    })
    .option("arms", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "arm labels (and, for power_sweep, row selection)",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    })
    .parseSync();

  renderToFile({
    kind: args.kind as FigureKind,
    inputs: args.input,
    arms: args.arms,
    output: args.out,
  });
  console.log(`wrote ${args.out}`);
  return 0;
}

if (
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href
) {
  try {
    process.exit(main(process.argv.slice(2)));
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(1);
  }
}
