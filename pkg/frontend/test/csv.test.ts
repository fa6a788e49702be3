import { describe, expect, it } from "vitest";

import { parseTable, column, numericColumn } from "../src/csv.js";

const SAMPLE = [
  "# schema: demo-table/1",
  "t,value,tag",
  "0,1.5,a",
  "1,-2,b",
  "2,,c",
].join("\n");

describe("parseTable", () => {
  it("reads schema, header and rows", () => {
    const table = parseTable(SAMPLE);
    expect(table.schema).toBe("demo-table/1");
    expect(table.header).toEqual(["t", "value", "tag"]);
    expect(table.rows).toHaveLength(3);
  });

  it("parses schema-line flags", () => {
    const table = parseTable("# schema: bloch-trace/1 oracle=true\nt\n1");
    expect(table.flags).toEqual({ oracle: "true" });
  });

  it("enforces the expected schema name", () => {
    expect(() => parseTable(SAMPLE, "other/1")).toThrow(/expected schema 'other\/1'/);
    expect(parseTable(SAMPLE, "demo-table/1").schema).toBe("demo-table/1");
  });

  it("rejects text without a schema line", () => {
    expect(() => parseTable("t,value\n0,1")).toThrow(/missing '# schema:'/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseTable("# schema: x/1\na,b\n1,2,3")).toThrow(/3 fields/);
  });
});

describe("columns", () => {
  it("extracts raw and numeric columns by name", () => {
    const table = parseTable(SAMPLE);
    expect(column(table, "tag")).toEqual(["a", "b", "c"]);
    expect(numericColumn(table, "t")).toEqual([0, 1, 2]);
  });

  it("maps empty fields to NaN to keep row alignment", () => {
    const vals = numericColumn(parseTable(SAMPLE), "value");
    expect(vals[0]).toBe(1.5);
    expect(vals[1]).toBe(-2);
    expect(Number.isNaN(vals[2])).toBe(true);
  });

  it("names the missing column in the error", () => {
    expect(() => column(parseTable(SAMPLE), "nope")).toThrow(/no column 'nope'/);
  });

  it("round-trips 17-significant-digit floats exactly", () => {
    const x = 0.1 + 0.2;
    const table = parseTable(`# schema: x/1\nv\n${x.toPrecision(17)}`);
    expect(numericColumn(table, "v")[0]).toBe(x);
  });
});
