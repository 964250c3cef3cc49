/**
 * Readers for the two CSV formats the simulation harness exports:
 * error curves (distance sweep) and cost tables (operator benchmark).
 * Lines starting with '#' carry `key = value` metadata; the first
 * non-comment line is a strict header.  All parse failures throw
 * CsvSchemaError naming the offending column.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export class CsvSchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CsvSchemaError";
  }
}

export interface ErrorCurveData {
  distancesM: number[];
  errPointSource: number[];
  errPatch: number[];
  metadata: Record<string, string>;
}

export interface CostRowData {
  nPorts: number;
  nPatches: number;
  evalsPointSource: number;
  evalsPatch: number;
  evalRatio: number;
  timePointSourceS: number;
  timePatchS: number;
}

export interface CostTableData {
  rows: CostRowData[];
  metadata: Record<string, string>;
}

const ERROR_CURVE_COLUMNS = [
  "distance_m",
  "rel_err_point_source",
  "rel_err_patch",
] as const;

const COST_TABLE_COLUMNS = [
  "n_ports",
  "n_patches",
  "green_evals_point_source",
  "green_evals_patch",
  "eval_ratio",
  "time_point_source_s",
  "time_patch_s",
] as const;

function splitMetadata(text: string): {
  metadata: Record<string, string>;
  body: string;
} {
  const metadata: Record<string, string> = {};
  const rest: string[] = [];
  for (const line of text.split(/\r?\n/)) {
    if (line.startsWith("#")) {
      const stripped = line.slice(1).trim();
      const eq = stripped.indexOf("=");
      if (eq > 0) {
        metadata[stripped.slice(0, eq).trim()] = stripped.slice(eq + 1).trim();
      }
    } else if (line.trim().length > 0) {
      rest.push(line);
    }
  }
  return { metadata, body: rest.join("\n") };
}

function parseTable(
  path: string,
  expectedColumns: readonly string[],
): { columns: Record<string, number[]>; metadata: Record<string, string> } {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new CsvSchemaError(`${path}: ${(err as Error).message}`);
  }
  const { metadata, body } = splitMetadata(text);
  const parsed = Papa.parse<Record<string, string>>(body, {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const column of expectedColumns) {
    if (!fields.includes(column)) {
      throw new CsvSchemaError(
        `${path}: missing required column '${column}' ` +
          `(found: ${fields.join(", ") || "none"})`,
      );
    }
  }
  if (parsed.data.length === 0) {
    throw new CsvSchemaError(`${path}: no data rows`);
  }
  const columns: Record<string, number[]> = {};
  for (const column of expectedColumns) {
    columns[column] = parsed.data.map((row, i) => {
      const raw = row[column];
      const value = Number(raw);
      if (raw === undefined || raw === "" || !Number.isFinite(value)) {
        throw new CsvSchemaError(
          `${path}: column '${column}' row ${i + 1}: ` +
            `expected a finite number, got '${raw ?? ""}'`,
        );
      }
      return value;
    });
  }
  return { columns, metadata };
}

export function readErrorCurveCsv(path: string): ErrorCurveData {
  const { columns, metadata } = parseTable(path, ERROR_CURVE_COLUMNS);
  return {
    distancesM: columns.distance_m,
    errPointSource: columns.rel_err_point_source,
    errPatch: columns.rel_err_patch,
    metadata,
  };
}

export function readCostTableCsv(path: string): CostTableData {
  const { columns, metadata } = parseTable(path, COST_TABLE_COLUMNS);
  const rows: CostRowData[] = columns.n_ports.map((_, i) => ({
    nPorts: columns.n_ports[i],
    nPatches: columns.n_patches[i],
    evalsPointSource: columns.green_evals_point_source[i],
    evalsPatch: columns.green_evals_patch[i],
    evalRatio: columns.eval_ratio[i],
    timePointSourceS: columns.time_point_source_s[i],
    timePatchS: columns.time_patch_s[i],
  }));
  return { rows, metadata };
}
