import { describe, expect, test } from "vitest";
import { SchemaError, groupByEngine, parseStatsCsv } from "../src/csv.js";

const HEADER =
  "instance,engine,r,k,vars,clauses,diagnoses,explanations,sat_calls," +
  "elapsed_s,exhausted,percent_enumerated";

describe("parseStatsCsv", () => {
  test("parses a well-formed file", () => {
    const rows = parseStatsCsv(
      `${HEADER}\n` +
        "encoder_r2_k2,separate,2,2,17,15,1,0,120,0.0512,1,100.0000\n" +
        "weird,ihsd,,,5,4,2,3,9,1.5000,0,\n",
    );
    expect(rows).toHaveLength(2);
    expect(rows[0]).toMatchObject({
      instance: "encoder_r2_k2",
      engine: "separate",
      r: 2,
      k: 2,
      satCalls: 120,
      exhausted: true,
      percentEnumerated: 100,
    });
    expect(rows[1]).toMatchObject({
      r: null,
      k: null,
      exhausted: false,
      percentEnumerated: null,
    });
  });

  test("rejects a missing column", () => {
    const broken = HEADER.replace(",percent_enumerated", "");
    expect(() => parseStatsCsv(`${broken}\nx,ihsd,,,1,1,1,0,1,0.1,1\n`)).toThrow(
      SchemaError,
    );
  });

  test("rejects negative elapsed time", () => {
    expect(() =>
      parseStatsCsv(`${HEADER}\nx,ihsd,,,1,1,1,0,1,-3,1,\n`),
    ).toThrow(SchemaError);
  });

  test("rejects an empty file", () => {
    expect(() => parseStatsCsv("")).toThrow(SchemaError);
  });

  test("groups rows by engine in first-seen order", () => {
    const rows = parseStatsCsv(
      `${HEADER}\n` +
        "a,ihsd,,,1,1,1,0,1,0.1,1,\n" +
        "b,separate,,,1,1,1,0,1,0.2,1,100\n" +
        "c,ihsd,,,1,1,1,0,1,0.3,1,\n",
    );
    const groups = groupByEngine(rows);
    expect([...groups.keys()]).toEqual(["ihsd", "separate"]);
    expect(groups.get("ihsd")).toHaveLength(2);
  });
});
