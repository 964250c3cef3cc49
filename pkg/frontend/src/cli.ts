#!/usr/bin/env node
/**
 * patchrad-plots: turn sweep/benchmark CSV exports into SVG or PNG
 * figures.  Exit code 2 for usage problems, 1 for parse or IO failures.
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";
import { CsvSchemaError, readCostTableCsv, readErrorCurveCsv } from "./csv.js";
import { renderCostTable } from "./costTable.js";
import { renderErrorCurves } from "./errorCurves.js";
import { writeFigure } from "./render.js";

const USAGE = `usage: patchrad-plots <command> --input FILE --output FILE [options]

commands:
  error-curves   relative error vs distance from a sweep CSV
  cost-table     kernel evaluations and wall time from a benchmark CSV

options:
  --input FILE   input CSV path (required)
  --output FILE  output figure path, .svg or .png (required)
  --title TEXT   override the figure title
  --no-log-y     linear y axis (error-curves only)
`;

class UsageError extends Error {}

function parse(argv: string[]): {
  command: string;
  input: string;
  output: string;
  title?: string;
  noLogY: boolean;
} {
  const { values, positionals } = parseArgs({
    args: argv,
    allowPositionals: true,
    options: {
      input: { type: "string" },
      output: { type: "string" },
      title: { type: "string" },
      "no-log-y": { type: "boolean", default: false },
    },
  });
  if (positionals.length !== 1) {
    throw new UsageError("expected exactly one command");
  }
  const command = positionals[0];
  if (command !== "error-curves" && command !== "cost-table") {
    throw new UsageError(`unknown command '${command}'`);
  }
  if (!values.input) throw new UsageError("--input is required");
  if (!values.output) throw new UsageError("--output is required");
  if (values["no-log-y"] && command !== "error-curves") {
    throw new UsageError("--no-log-y only applies to error-curves");
  }
  return {
    command,
    input: values.input,
    output: values.output,
    title: values.title,
    noLogY: values["no-log-y"],
  };
}

export function main(argv: string[]): number {
  let parsed: ReturnType<typeof parse>;
  try {
    parsed = parse(argv);
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    process.stderr.write(`error: ${message}\n\n${USAGE}`);
    return 2;
  }
  try {
    let svg: string;
    if (parsed.command === "error-curves") {
      svg = renderErrorCurves(readErrorCurveCsv(parsed.input), {
        logY: !parsed.noLogY,
        title: parsed.title,
      });
    } else {
      svg = renderCostTable(readCostTableCsv(parsed.input), {
        title: parsed.title,
      });
    }
    writeFigure(svg, parsed.output);
    process.stdout.write(`wrote ${parsed.output}\n`);
    return 0;
  } catch (err) {
    if (err instanceof CsvSchemaError || err instanceof Error) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
