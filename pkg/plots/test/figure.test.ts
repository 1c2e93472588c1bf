import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { render, renderToFile, type PlotSpec } from "../src/figure.js";

const GOLDEN = fileURLToPath(new URL("../golden", import.meta.url));
const FIGURES = fileURLToPath(new URL("../figures", import.meta.url));

const CONV_SPEC: PlotSpec = {
  kind: "convergence",
  inputs: ["trace_fixed.csv", "trace_pso.csv", "trace_exhaustive.csv"].map(
    (f) => join(GOLDEN, f),
  ),
  arms: ["fixed", "pso", "exhaustive"],
  output: "unused.svg",
};

const SWEEP_SPEC: PlotSpec = {
  kind: "power_sweep",
  inputs: [join(GOLDEN, "aggregate_sweep.csv")],
  arms: ["fixed", "pso", "exhaustive"],
  output: "unused.svg",
};

function tmpFile(name: string, text?: string): string {
  const path = join(mkdtempSync(join(tmpdir(), "plots-")), name);
  if (text !== undefined) writeFileSync(path, text);
  return path;
}

function syntheticTrace(rows: number): string {
  const lines = ["# schema=trace-v1", "iteration,objective,rotation"];
  for (let i = 0; i < rows; i++) {
    lines.push(`${i},${(1 - Math.exp(-i / 5)).toFixed(6)},0`);
  }
  return lines.join("\n") + "\n";
}

describe("convergence figures", () => {
  it("renders the golden traces with one line per arm and a legend", () => {
    const svg = render(CONV_SPEC);
    expect(svg.match(/class="series"/g)).toHaveLength(3);
    expect(svg).toContain('class="legend-label">fixed</text>');
    expect(svg).toContain('class="legend-label">pso</text>');
    expect(svg).toContain('class="legend-label">exhaustive</text>');
    expect(svg).toContain(">iteration</text>");
    expect(svg).toContain(">objective (bits/s/Hz)</text>");
  });

  it("draws a single 30-point line from a 30-row single-arm CSV", () => {
    const path = tmpFile("conv.csv", syntheticTrace(30));
    const svg = render({
      kind: "convergence",
      inputs: [path],
      arms: ["exhaustive"],
      output: "unused.svg",
    });
    const polylines = svg.match(/<polyline points="([^"]*)"/g)!;
    expect(polylines).toHaveLength(1);
    const points = /<polyline points="([^"]*)"/.exec(svg)![1];
    expect(points.split(" ")).toHaveLength(30);
  });

  it("requires one input per arm", () => {
    expect(() =>
      render({ ...CONV_SPEC, arms: ["fixed"] }),
    ).toThrow(/3 inputs, 1 arms/);
  });

  it("names the missing column when handed an aggregate CSV", () => {
    expect(() =>
      render({
        kind: "convergence",
        inputs: [join(GOLDEN, "aggregate_sweep.csv")],
        arms: ["fixed"],
        output: "unused.svg",
      }),
    ).toThrow(/column "iteration" not found.*mean_objective/);
  });
});

describe("power-sweep figures", () => {
  it("renders the golden aggregate with three lines", () => {
    const svg = render(SWEEP_SPEC);
    expect(svg.match(/class="series"/g)).toHaveLength(3);
    expect(svg).toContain(">transmit power (dBm)</text>");
  });

  it("names the missing column when handed a trace CSV", () => {
    expect(() =>
      render({
        kind: "power_sweep",
        inputs: [join(GOLDEN, "trace_fixed.csv")],
        arms: ["fixed"],
        output: "unused.svg",
      }),
    ).toThrow(/column "arm" not found.*iteration/);
  });

  it("lists the arms the CSV does have when one is unknown", () => {
    expect(() => render({ ...SWEEP_SPEC, arms: ["warp"] })).toThrow(
      /no rows for arm "warp".*exhaustive, fixed, pso/,
    );
  });

  it("rejects a non-finite mean for a selected arm", () => {
    const path = tmpFile(
      "agg.csv",
      "# schema=aggregate-v1\narm,pmax_dbm,mean_objective\nfixed,20,nan\n",
    );
    expect(() =>
      render({
        kind: "power_sweep",
        inputs: [path],
        arms: ["fixed"],
        output: "unused.svg",
      }),
    ).toThrow(/mean_objective.*not finite/);
  });

  it("accepts one aggregate CSV only", () => {
    expect(() =>
      render({ ...SWEEP_SPEC, inputs: [...SWEEP_SPEC.inputs, "x.csv"] }),
    ).toThrow(/single aggregate CSV/);
  });
});

describe("spec validation and file behavior", () => {
  it("requires at least one arm", () => {
    expect(() => render({ ...CONV_SPEC, arms: [], inputs: [] })).toThrow(
      /at least one arm/,
    );
  });

  it("writes nothing when the input is empty", () => {
    const empty = tmpFile("empty.csv", "# schema=trace-v1\niteration,objective\n");
    const out = tmpFile("out.svg");
    expect(() =>
      renderToFile({
        kind: "convergence",
        inputs: [empty],
        arms: ["fixed"],
        output: out,
      }),
    ).toThrow(/no data rows/);
    expect(existsSync(out)).toBe(false);
  });

  it("writes the SVG once the spec is valid", () => {
    const out = tmpFile("fig.svg");
    renderToFile({ ...SWEEP_SPEC, output: out });
    expect(readFileSync(out, "utf8")).toBe(render(SWEEP_SPEC));
  });
});

describe("determinism", () => {
  it("render is a pure function of CSV content and spec", () => {
    expect(render(CONV_SPEC)).toBe(render(CONV_SPEC));
    expect(render(SWEEP_SPEC)).toBe(render(SWEEP_SPEC));
  });

  it("matches the committed figures byte for byte", () => {
    expect(render(CONV_SPEC)).toBe(
      readFileSync(join(FIGURES, "convergence.svg"), "utf8"),
    );
    expect(render(SWEEP_SPEC)).toBe(
      readFileSync(join(FIGURES, "power_sweep.svg"), "utf8"),
    );
  });
});
