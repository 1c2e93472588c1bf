/**
 * Figure assembly: a PlotSpec names the input CSVs, the figure kind,
 * the arms to draw, and the output path.  Rendering is a pure function
 * of the CSV bytes and the spec; the output file is written only after
 * the whole figure has been built, so a failing spec leaves nothing
 * behind.
 */

import { writeFileSync } from "node:fs";
import { column, numericColumn, readSchemaCsv, type SchemaCsv } from "./csv.js";
import { renderFigure, type Axes, type Series } from "./svg.js";

export type FigureKind = "convergence" | "power_sweep";

export interface PlotSpec {
  kind: FigureKind;
  /** convergence: one trace CSV per arm; power_sweep: one aggregate CSV. */
  inputs: string[];
  arms: string[];
  output: string;
}

function checkFinite(csv: SchemaCsv, name: string, values: number[]): number[] {
  for (const [i, v] of values.entries()) {
    if (!Number.isFinite(v)) {
      throw new Error(`${csv.path}: column "${name}" row ${i}: not finite`);
    }
  }
  return values;
}

function sortedPairs(x: number[], y: number[]): [number[], number[]] {
  const order = x.map((_, i) => i).sort((a, b) => x[a] - x[b]);
  return [order.map((i) => x[i]), order.map((i) => y[i])];
}

function convergenceSeries(spec: PlotSpec): Series[] {
  if (spec.inputs.length !== spec.arms.length) {
    throw new Error(
      `convergence needs one trace CSV per arm: ` +
        `${spec.inputs.length} inputs, ${spec.arms.length} arms`,
    );
  }
  return spec.inputs.map((path, i) => {
    const csv = readSchemaCsv(path);
    if (csv.rows.length === 0) {
      throw new Error(`${path}: no data rows`);
    }
    const [x, y] = sortedPairs(
      checkFinite(csv, "iteration", numericColumn(csv, "iteration")),
      checkFinite(csv, "objective", numericColumn(csv, "objective")),
    );
    return { label: spec.arms[i], x, y };
  });
}

function powerSweepSeries(spec: PlotSpec): Series[] {
  if (spec.inputs.length !== 1) {
    throw new Error(
      `power_sweep reads a single aggregate CSV, got ${spec.inputs.length}`,
    );
  }
  const csv = readSchemaCsv(spec.inputs[0]);
  if (csv.rows.length === 0) {
    throw new Error(`${csv.path}: no data rows`);
  }
  const arms = column(csv, "arm");
  const pmax = checkFinite(csv, "pmax_dbm", numericColumn(csv, "pmax_dbm"));
  const mean = numericColumn(csv, "mean_objective");
  return spec.arms.map((arm) => {
    const idx = arms.flatMap((a, i) => (a === arm ? [i] : []));
    if (idx.length === 0) {
      const seen = [...new Set(arms)].sort().join(", ");
      throw new Error(`${csv.path}: no rows for arm "${arm}" (arms: ${seen})`);
    }
    for (const i of idx) {
      if (!Number.isFinite(mean[i])) {
        throw new Error(
          `${csv.path}: column "mean_objective" row ${i}: not finite`,
        );
      }
    }
    const [x, y] = sortedPairs(idx.map((i) => pmax[i]), idx.map((i) => mean[i]));
    return { label: arm, x, y };
  });
}

const AXES: Record<FigureKind, Axes> = {
  convergence: { xLabel: "iteration", yLabel: "objective (bits/s/Hz)" },
  power_sweep: {
    xLabel: "transmit power (dBm)",
    yLabel: "objective (bits/s/Hz)",
  },
};

/** Build the SVG text for a spec without touching the filesystem output. */
export function render(spec: PlotSpec): string {
  if (spec.arms.length === 0) {
    throw new Error("at least one arm must be selected");
  }
  if (spec.kind !== "convergence" && spec.kind !== "power_sweep") {
    throw new Error(`unknown figure kind "${spec.kind}"`);
  }
  const series =
    spec.kind === "convergence"
      ? convergenceSeries(spec)
      : powerSweepSeries(spec);
  return renderFigure(series, AXES[spec.kind]);
}

export function renderToFile(spec: PlotSpec): void {
  const svg = render(spec);
  writeFileSync(spec.output, svg);
}
