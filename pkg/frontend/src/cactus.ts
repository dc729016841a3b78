/**
 * Cactus plot: for each engine, solved-run times sorted ascending, plotted
 * as cumulative solved count (x) against time on a log axis (y). Runs that
 * did not finish inside the budget are excluded.
 */

import { StatsRow, groupByEngine } from "./csv.js";
import { DEFAULT_FRAME, SERIES_COLORS, SvgChart, linearScale, logScale } from "./svg.js";

export class NoDataError extends Error {}

export interface CactusSeries {
  engine: string;
  /** Ascending solve times of completed runs. */
  times: number[];
}

export function cactusSeries(rows: StatsRow[]): CactusSeries[] {
  const groups = groupByEngine(rows);
  if (groups.size === 0) {
    throw new NoDataError("no rows to plot");
  }
  const series: CactusSeries[] = [];
  for (const [engine, engineRows] of groups) {
    const times = engineRows
      .filter((r) => r.exhausted)
      .map((r) => r.elapsedS)
      .sort((a, b) => a - b);
    series.push({ engine, times });
  }
  return series;
}

export function renderCactusPlot(rows: StatsRow[]): string {
  const series = cactusSeries(rows);
  const allTimes = series.flatMap((s) => s.times);
  const maxCount = Math.max(...series.map((s) => s.times.length), 1);
  // log axis floor: clamp instant runs to a tenth of a millisecond
  const floor = 1e-4;
  const hi = Math.max(...allTimes, floor) * 1.5;

  const chart = new SvgChart(
    DEFAULT_FRAME,
    "Instances solved within the budget",
    "instances solved",
    "time (s, log scale)",
  );
  const area = chart.plotArea;
  const x = linearScale(0, maxCount, area.x0, area.x1);
  const y = logScale(floor, hi, area.y0, area.y1);
  chart.drawAxes(x, y);
  series.forEach((s, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const points = s.times.map((t, j) => {
      const clamped = Math.max(t, floor);
      return { x: j + 1, y: t, px: x(j + 1), py: y(clamped) };
    });
    chart.drawSeries(s.engine, points, color);
  });
  chart.drawLegend(
    series.map((s, i) => ({
      name: `${s.engine} (${s.times.length} solved)`,
      color: SERIES_COLORS[i % SERIES_COLORS.length],
    })),
  );
  return chart.render();
}
