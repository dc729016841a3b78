#!/usr/bin/env node
/**
 * Render evaluation figures from diagnosis-run statistics.
 *
 * Usage:
 *   mbdkit-plots cactus  OUT.svg STATS.csv [MORE.csv ...]
 *   mbdkit-plots percent OUT.svg STATS.csv [MORE.csv ...]
 *
 * Several CSV files may be given (e.g. one bench run per engine); rows are
 * concatenated and series are split by the engine column.
 */

import { readFile, writeFile } from "fs/promises";
import { parseStatsCsv, SchemaError, StatsRow } from "./csv.js";
import { NoDataError, renderCactusPlot } from "./cactus.js";
import { renderPercentPlot } from "./percent.js";

async function loadRows(paths: string[]): Promise<StatsRow[]> {
  const rows: StatsRow[] = [];
  for (const path of paths) {
    rows.push(...parseStatsCsv(await readFile(path, "utf8")));
  }
  return rows;
}

export async function main(argv: string[]): Promise<number> {
  const [command, out, ...inputs] = argv;
  if (!command || !out || inputs.length === 0) {
    console.error("usage: mbdkit-plots cactus|percent OUT.svg STATS.csv [MORE.csv ...]");
    return 64;
  }
  try {
    const rows = await loadRows(inputs);
    let svg: string;
    if (command === "cactus") {
      svg = renderCactusPlot(rows);
    } else if (command === "percent") {
      svg = renderPercentPlot(rows);
    } else {
      console.error(`unknown plot kind '${command}'`);
      return 64;
    }
    await writeFile(out, svg, "utf8");
    console.log(out);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof NoDataError) {
      console.error(`error: ${err.message}`);
      return 65;
    }
    throw err;
  }
}

const isEntry = process.argv[1] && import.meta.url.endsWith(
  process.argv[1].split("/").pop() ?? "",
);
if (isEntry) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
