/**
 * CSV loading and schema validation for the harness output files.
 */

import Papa from "papaparse";

export class SchemaError extends Error {}

export interface Table {
  columns: string[];
  /** Row-major numeric values; non-numeric cells become NaN. */
  rows: number[][];
}

export function parseCsv(text: string): Table {
  const result = Papa.parse<string[]>(text.trim(), {
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (result.errors.length > 0) {
    throw new SchemaError(`CSV parse error: ${result.errors[0].message}`);
  }
  const data = result.data;
  if (data.length === 0) {
    throw new SchemaError("CSV is empty");
  }
  const columns = data[0];
  if (data.length === 1) {
    throw new SchemaError("CSV has a header but no data rows");
  }
  const rows: number[][] = [];
  for (let i = 1; i < data.length; i++) {
    if (data[i].length !== columns.length) {
      throw new SchemaError(
        `row ${i + 1} has ${data[i].length} cells, expected ${columns.length}`,
      );
    }
    rows.push(data[i].map((cell) => Number(cell)));
  }
  return { columns, rows };
}

/** Column values by name; throws when the column is missing. */
export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`missing required column '${name}'`);
  }
  return table.rows.map((row) => row[idx]);
}

export function hasColumn(table: Table, name: string): boolean {
  return table.columns.includes(name);
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    if (!hasColumn(table, name)) {
      throw new SchemaError(
        `missing required column '${name}' (found: ${table.columns.join(", ")})`,
      );
    }
  }
}
