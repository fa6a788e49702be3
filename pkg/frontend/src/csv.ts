import fs from "node:fs";

/**
 * A parsed CSV table with its schema tag.
 *
 * Run-directory tables start with a comment line `# schema: <name>/<version>`
 * (possibly followed by `key=value` flags), then a header row, then data.
 */
export interface Table {
  schema: string;
  flags: Record<string, string>;
  header: string[];
  rows: string[][];
}

/**
 * Parse CSV text that carries a schema line.
 *
 * @param text – Full file contents.
 * @param expected – When given, the schema name must match exactly.
 */
export function parseTable(text: string, expected?: string): Table {
  const lines = text.split("\n").filter((ln) => ln.trim().length > 0);
  if (lines.length === 0 || !lines[0].startsWith("# schema:")) {
    throw new Error("missing '# schema:' line");
  }
  const head = lines[0].slice("# schema:".length).trim().split(/\s+/);
  const schema = head[0];
  const flags: Record<string, string> = {};
  for (const tok of head.slice(1)) {
    const eq = tok.indexOf("=");
    if (eq > 0) flags[tok.slice(0, eq)] = tok.slice(eq + 1);
  }
  if (expected !== undefined && schema !== expected) {
    throw new Error(`expected schema '${expected}', got '${schema}'`);
  }
  if (lines.length < 2) throw new Error(`schema '${schema}': missing header row`);
  const header = lines[1].split(",");
  const rows = lines.slice(2).map((ln) => ln.split(","));
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new Error(
        `schema '${schema}': row has ${row.length} fields, header has ${header.length}`,
      );
    }
  }
  return { schema, flags, header, rows };
}

/** Read and parse a schema-tagged CSV file. */
export function readTable(path: string, expected?: string): Table {
  let text: string;
  try {
    text = fs.readFileSync(path, "utf-8");
  } catch {
    throw new Error(`cannot read ${path}`);
  }
  try {
    return parseTable(text, expected);
  } catch (err) {
    throw new Error(`${path}: ${(err as Error).message}`);
  }
}

/** Raw string column by header name. */
export function column(table: Table, name: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(`no column '${name}' in header [${table.header.join(", ")}]`);
  }
  return table.rows.map((row) => row[idx]);
}

/**
 * Numeric column by header name. Empty fields become NaN so optional
 * columns (phi, seed) keep their row alignment.
 */
export function numericColumn(table: Table, name: string): number[] {
  return column(table, name).map((s) => (s === "" ? NaN : Number(s)));
}
