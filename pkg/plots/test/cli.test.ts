import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it, vi } from "vitest";

import { main } from "../src/cli.js";

const GOLDEN = fileURLToPath(new URL("../golden", import.meta.url));

function outPath(): string {
  return join(mkdtempSync(join(tmpdir(), "plots-cli-")), "fig.svg");
}

describe("cli", () => {
  it("renders a power sweep end to end", () => {
    const out = outPath();
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    const rc = main([
      "--kind", "power_sweep",
      "--input", join(GOLDEN, "aggregate_sweep.csv"),
      "--arms", "fixed", "pso", "exhaustive",
      "--out", out,
    ]);
    log.mockRestore();
    expect(rc).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("<svg");
  });

  it("renders a convergence figure from several traces", () => {
    const out = outPath();
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    const rc = main([
      "--kind", "convergence",
      "--input",
      join(GOLDEN, "trace_fixed.csv"),
      join(GOLDEN, "trace_exhaustive.csv"),
      "--arms", "fixed", "exhaustive",
      "--out", out,
    ]);
    log.mockRestore();
    expect(rc).toBe(0);
    expect(readFileSync(out, "utf8")).toMatch(/class="series"/);
  });

  it("rejects a missing required flag", () => {
    expect(() =>
      main(["--kind", "convergence", "--arms", "fixed", "--out", "x.svg"]),
    ).toThrow(/input/);
  });

  it("rejects an unknown kind", () => {
    expect(() =>
      main([
        "--kind", "heatmap",
        "--input", "a.csv",
        "--arms", "fixed",
        "--out", "x.svg",
      ]),
    ).toThrow(/kind/);
  });

  it("propagates figure errors without writing the file", () => {
    const out = outPath();
    expect(() =>
      main([
        "--kind", "power_sweep",
        "--input", join(GOLDEN, "trace_fixed.csv"),
        "--arms", "fixed",
        "--out", out,
      ]),
    ).toThrow(/column "arm"/);
    expect(existsSync(out)).toBe(false);
  });
});
