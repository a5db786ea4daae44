/**
 * CSV ingestion for the experiment harness outputs.
 *
 * Files are comma-separated with one header row.  Numeric cells may be
 * "inf" / "-inf" / "nan" (python float repr), which JavaScript's
 * parseFloat does not accept; they map to Infinity / -Infinity / NaN.
 */

import { readFileSync } from "node:fs";

export type Row = Record<string, number | string>;

export interface Table {
  columns: string[];
  rows: Row[];
}

function parseCell(text: string): number | string {
  const t = text.trim();
  if (t === "inf") return Infinity;
  if (t === "-inf") return -Infinity;
  if (t === "nan") return NaN;
  if (t !== "" && !Number.isNaN(Number(t))) return Number(t);
  return t;
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length < 1) {
    throw new Error("empty CSV");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((line) => {
    const cells = line.split(",");
    const row: Row = {};
    columns.forEach((name, i) => {
      row[name] = parseCell(cells[i] ?? "");
    });
    return row;
  });
  return { columns, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"));
}

/** Validate that every referenced column exists; throws naming the file. */
export function requireColumns(table: Table, path: string, needed: string[]): void {
  const missing = needed.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new Error(`${path}: missing required column(s) ${missing.join(", ")}`);
  }
}

/** Distinct values of a column, in first-appearance order. */
export function distinct(table: Table, column: string): (number | string)[] {
  const seen: (number | string)[] = [];
  for (const row of table.rows) {
    const v = row[column];
    if (!seen.some((s) => Object.is(s, v))) seen.push(v);
  }
  return seen;
}
