import { describe, expect, it } from "vitest";

import { distinct, parseCsv, requireColumns } from "../src/csv";

describe("parseCsv", () => {
  it("parses numbers, strings, and python float specials", () => {
    const table = parseCsv("iter,algo,srer_db,snr_db\n1,bpr,12.5,inf\n2,bpr,nan,-inf\n");
    expect(table.columns).toEqual(["iter", "algo", "srer_db", "snr_db"]);
    expect(table.rows).toHaveLength(2);
    expect(table.rows[0].iter).toBe(1);
    expect(table.rows[0].algo).toBe("bpr");
    expect(table.rows[0].snr_db).toBe(Infinity);
    expect(table.rows[1].srer_db).toBeNaN();
    expect(table.rows[1].snr_db).toBe(-Infinity);
  });

  it("rejects empty input", () => {
    expect(() => parseCsv("")).toThrow(/empty/);
  });
});

describe("requireColumns", () => {
  it("names the file and the missing columns", () => {
    const table = parseCsv("a,b\n1,2\n");
    expect(() => requireColumns(table, "data.csv", ["a", "cost", "eta"]))
      .toThrow(/data\.csv: missing required column\(s\) cost, eta/);
  });

  it("passes when all columns exist", () => {
    const table = parseCsv("a,b\n1,2\n");
    expect(() => requireColumns(table, "data.csv", ["a", "b"])).not.toThrow();
  });
});

describe("distinct", () => {
  it("keeps first-appearance order", () => {
    const table = parseCsv("k\n20\n6\n20\n10\n");
    expect(distinct(table, "k")).toEqual([20, 6, 10]);
  });
});
