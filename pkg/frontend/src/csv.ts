/**
 * Statistics-CSV ingestion.
 *
 * The diagnosis CLI writes one row per run with the columns below; this
 * module parses that file into typed rows and validates the schema.
 */

export interface StatsRow {
  instance: string;
  engine: string;
  r: number | null;
  k: number | null;
  vars: number;
  clauses: number;
  diagnoses: number;
  explanations: number;
  satCalls: number;
  elapsedS: number;
  exhausted: boolean;
  /** Share of per-observation diagnoses enumerated; null when unknown. */
  percentEnumerated: number | null;
}

export class SchemaError extends Error {}

const REQUIRED = [
  "instance",
  "engine",
  "r",
  "k",
  "vars",
  "clauses",
  "diagnoses",
  "explanations",
  "sat_calls",
  "elapsed_s",
  "exhausted",
  "percent_enumerated",
];

/** Minimal CSV field splitter; the writer never emits quoted commas. */
function splitLine(line: string): string[] {
  return line.split(",").map((f) => f.trim());
}

function toInt(field: string, line: number, name: string): number {
  const value = Number(field);
  if (!Number.isInteger(value)) {
    throw new SchemaError(`line ${line}: ${name} must be an integer, got '${field}'`);
  }
  return value;
}

export function parseStatsCsv(text: string): StatsRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty statistics file");
  }
  const header = splitLine(lines[0]);
  const index = new Map(header.map((name, i) => [name, i]));
  for (const name of REQUIRED) {
    if (!index.has(name)) {
      throw new SchemaError(`missing required column '${name}'`);
    }
  }
  const col = (fields: string[], name: string) => fields[index.get(name)!] ?? "";
  const rows: StatsRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = splitLine(lines[i]);
    const elapsed = Number(col(fields, "elapsed_s"));
    if (!Number.isFinite(elapsed) || elapsed < 0) {
      throw new SchemaError(`line ${i + 1}: elapsed_s must be a non-negative number`);
    }
    const percentField = col(fields, "percent_enumerated");
    const rField = col(fields, "r");
    const kField = col(fields, "k");
    rows.push({
      instance: col(fields, "instance"),
      engine: col(fields, "engine"),
      r: rField === "" ? null : toInt(rField, i + 1, "r"),
      k: kField === "" ? null : toInt(kField, i + 1, "k"),
      vars: toInt(col(fields, "vars"), i + 1, "vars"),
      clauses: toInt(col(fields, "clauses"), i + 1, "clauses"),
      diagnoses: toInt(col(fields, "diagnoses"), i + 1, "diagnoses"),
      explanations: toInt(col(fields, "explanations"), i + 1, "explanations"),
      satCalls: toInt(col(fields, "sat_calls"), i + 1, "sat_calls"),
      elapsedS: elapsed,
      exhausted: col(fields, "exhausted") === "1",
      percentEnumerated: percentField === "" ? null : Number(percentField),
    });
  }
  return rows;
}

/** Rows grouped by engine, preserving first-seen engine order. */
export function groupByEngine(rows: StatsRow[]): Map<string, StatsRow[]> {
  const groups = new Map<string, StatsRow[]>();
  for (const row of rows) {
    const bucket = groups.get(row.engine);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(row.engine, [row]);
    }
  }
  return groups;
}
