/**
 * Reader for the harness CSV files.  Every file starts with a
 * "# schema=<name>" comment line, then a header row, then data rows;
 * floats are printed by %.12g so "nan" and "inf" appear literally.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface SchemaCsv {
  path: string;
  schema: string;
  header: string[];
  rows: string[][];
}

export function readSchemaCsv(path: string): SchemaCsv {
  const text = readFileSync(path, "utf8");
  const nl = text.indexOf("\n");
  const first = (nl < 0 ? text : text.slice(0, nl)).trim();
  if (!first.startsWith("# schema=")) {
    throw new Error(`${path}: missing "# schema=<name>" header line`);
  }
  const schema = first.slice("# schema=".length);
  const body = nl < 0 ? "" : text.slice(nl + 1).trim();
  if (body === "") {
    throw new Error(`${path}: no header row`);
  }
  const parsed = Papa.parse<string[]>(body, {
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`${path}: row ${e.row}: ${e.message}`);
  }
  const [header, ...rows] = parsed.data;
  for (const [i, row] of rows.entries()) {
    if (row.length !== header.length) {
      throw new Error(
        `${path}: row ${i} has ${row.length} fields, header has ${header.length}`,
      );
    }
  }
  return { path, schema, header, rows };
}

/** String column by name; the error spells out what the file does have. */
export function column(csv: SchemaCsv, name: string): string[] {
  const idx = csv.header.indexOf(name);
  if (idx < 0) {
    throw new Error(
      `${csv.path}: column "${name}" not found ` +
        `(schema ${csv.schema}; columns: ${csv.header.join(", ")})`,
    );
  }
  return csv.rows.map((r) => r[idx]);
}

export function numericColumn(csv: SchemaCsv, name: string): number[] {
  return column(csv, name).map((s, i) => {
    const t = s.trim();
    if (t === "nan") return NaN;
    if (t === "inf") return Infinity;
    if (t === "-inf") return -Infinity;
    const v = t === "" ? NaN : Number(t);
    if (Number.isNaN(v)) {
      throw new Error(
        `${csv.path}: column "${name}" row ${i}: not a number: "${s}"`,
      );
    }
    return v;
  });
}
