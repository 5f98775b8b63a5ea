import { readFileSync } from "fs";
import Papa from "papaparse";

/** Input rejected before any drawing: wrong columns, empty file, bad cell. */
export class SchemaError extends Error {}

export type Row = Record<string, number | string>;

/**
 * Load a CSV produced by the tacnode-lab CLI and check its header.
 *
 * Column order must match exactly (the CLI writes a fixed schema) and
 * every listed numeric column must parse as a finite number in every row.
 */
export function readCsv(
  path: string,
  columns: string[],
  numeric: string[],
): Row[] {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new SchemaError(`cannot read ${path}: ${(err as Error).message}`);
  }
  const parsed = Papa.parse<Row>(text, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  if (fields.join(",") !== columns.join(",")) {
    throw new SchemaError(
      `${path}: expected columns ${columns.join(",")}, got ${fields.join(",")}`,
    );
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  for (const row of parsed.data) {
    for (const col of numeric) {
      const v = row[col];
      if (typeof v !== "number" || !Number.isFinite(v)) {
        throw new SchemaError(`${path}: non-numeric ${col} value ${v}`);
      }
    }
  }
  return parsed.data;
}

/** Wrap a script body: usage problems exit 2, data problems exit 1. */
export function runMain(
  argv: string[],
  usage: string,
  positional: number,
  body: (args: string[]) => void,
): void {
  const args = argv.slice(2);
  if (args.length < positional || args.length > positional + 1) {
    console.error(`usage: ${usage}`);
    process.exit(2);
  }
  try {
    body(args);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(err.message);
      process.exit(1);
    }
    throw err;
  }
}
