import { describe, expect, test } from "vitest";
import { NoDataError } from "../src/cactus.js";
import { StatsRow } from "../src/csv.js";
import { percentSeries, renderPercentPlot } from "../src/percent.js";

function row(percent: number | null, engine = "separate"): StatsRow {
  return {
    instance: "x",
    engine,
    r: null,
    k: null,
    vars: 1,
    clauses: 1,
    diagnoses: 1,
    explanations: 0,
    satCalls: 1,
    elapsedS: 0.1,
    exhausted: percent === 100,
    percentEnumerated: percent,
  };
}

function seriesPoints(svg: string, name: string): Array<[number, number]> {
  const g = svg.match(new RegExp(`<g data-series="${name}"[^>]*>([\\s\\S]*?)</g>`));
  if (!g) return [];
  return [...g[1].matchAll(/data-x="([^"]+)" data-y="([^"]+)"/g)].map((m) => [
    Number(m[1]),
    Number(m[2]),
  ]);
}

describe("percent plot", () => {
  test("all rows at 100 give a flat line", () => {
    const svg = renderPercentPlot([row(100), row(100), row(100)]);
    const points = seriesPoints(svg, "separate");
    expect(points.map(([, y]) => y)).toEqual([100, 100, 100]);
    const pys = [...svg.matchAll(/cy="([^"]+)"/g)].map((m) => Number(m[1]));
    expect(new Set(pys).size).toBe(1);
  });

  test("half 100 half 0 steps at the midpoint, sorted descending", () => {
    const svg = renderPercentPlot([row(0), row(100), row(0), row(100)]);
    expect(seriesPoints(svg, "separate")).toEqual([
      [1, 100],
      [2, 100],
      [3, 0],
      [4, 0],
    ]);
    expect(svg).toContain("polyline");
  });

  test("rows without the value are skipped; none at all is an error", () => {
    const series = percentSeries([row(50), row(null, "ihsd")]);
    expect(series).toHaveLength(1);
    expect(series[0].engine).toBe("separate");
    expect(() => renderPercentPlot([row(null, "ihsd")])).toThrow(NoDataError);
  });

  test("identical input renders identical output", () => {
    const rows = [row(90), row(10)];
    expect(renderPercentPlot(rows)).toEqual(renderPercentPlot(rows));
  });
});
