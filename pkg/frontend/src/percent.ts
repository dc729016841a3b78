/**
 * Percent-enumerated plot: how close each run came to enumerating every
 * per-observation diagnosis. Instances are sorted by percent descending
 * and drawn as a step curve per engine.
 */

import { StatsRow, groupByEngine } from "./csv.js";
import { DEFAULT_FRAME, SERIES_COLORS, SvgChart, linearScale } from "./svg.js";
import { NoDataError } from "./cactus.js";

export interface PercentSeries {
  engine: string;
  /** Descending percent_enumerated values. */
  percents: number[];
}

export function percentSeries(rows: StatsRow[]): PercentSeries[] {
  const withPercent = rows.filter((r) => r.percentEnumerated !== null);
  if (withPercent.length === 0) {
    throw new NoDataError("no rows carry percent_enumerated");
  }
  const series: PercentSeries[] = [];
  for (const [engine, engineRows] of groupByEngine(withPercent)) {
    series.push({
      engine,
      percents: engineRows
        .map((r) => r.percentEnumerated as number)
        .sort((a, b) => b - a),
    });
  }
  return series;
}

export function renderPercentPlot(rows: StatsRow[]): string {
  const series = percentSeries(rows);
  const maxCount = Math.max(...series.map((s) => s.percents.length), 1);
  const chart = new SvgChart(
    DEFAULT_FRAME,
    "Share of per-observation diagnoses enumerated",
    "instances (sorted by share)",
    "% of diagnoses enumerated",
  );
  const area = chart.plotArea;
  const x = linearScale(0, maxCount, area.x0, area.x1);
  const y = linearScale(0, 100, area.y0, area.y1);
  chart.drawAxes(x, y);
  series.forEach((s, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const points = s.percents.map((p, j) => ({
      x: j + 1,
      y: p,
      px: x(j + 1),
      py: y(p),
    }));
    chart.drawSeries(s.engine, points, color, true);
  });
  chart.drawLegend(
    series.map((s, i) => ({
      name: s.engine,
      color: SERIES_COLORS[i % SERIES_COLORS.length],
    })),
  );
  return chart.render();
}
