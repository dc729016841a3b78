/**
 * Minimal SVG chart scaffolding: a framed plot area, linear or log axes
 * with ticks, a legend, and per-point data attributes so rendered series
 * can be re-parsed from the image file.
 */

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const DEFAULT_FRAME: Frame = {
  width: 720,
  height: 480,
  left: 80,
  right: 24,
  top: 36,
  bottom: 56,
};

export const SERIES_COLORS = ["#1b6ca8", "#c8401f", "#2e8540", "#7145a8", "#af6c0a"];

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface Scale {
  (value: number): number;
  ticks: number[];
}

export function linearScale(lo: number, hi: number, pixLo: number, pixHi: number): Scale {
  const span = hi - lo || 1;
  const scale = ((value: number) =>
    pixLo + ((value - lo) / span) * (pixHi - pixLo)) as Scale;
  const step = niceStep(span);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-9; t += step) {
    ticks.push(Number(t.toFixed(6)));
  }
  scale.ticks = ticks;
  return scale;
}

export function logScale(lo: number, hi: number, pixLo: number, pixHi: number): Scale {
  const logLo = Math.log10(lo);
  const logHi = Math.log10(hi);
  const span = logHi - logLo || 1;
  const scale = ((value: number) =>
    pixLo + ((Math.log10(value) - logLo) / span) * (pixHi - pixLo)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.floor(logLo); e <= Math.ceil(logHi); e++) {
    const t = Math.pow(10, e);
    if (t >= lo / 1.0001 && t <= hi * 1.0001) {
      ticks.push(t);
    }
  }
  scale.ticks = ticks;
  return scale;
}

function niceStep(span: number): number {
  const raw = span / 8;
  const mag = Math.pow(10, Math.floor(Math.log10(raw || 1)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) {
      return m * mag;
    }
  }
  return 10 * mag;
}

export function formatTick(value: number): string {
  if (value !== 0 && (Math.abs(value) >= 1e4 || Math.abs(value) < 1e-2)) {
    return value.toExponential(0);
  }
  return Number(value.toFixed(4)).toString();
}

export class SvgChart {
  private parts: string[] = [];

  constructor(
    readonly frame: Frame,
    title: string,
    private xLabel: string,
    private yLabel: string,
  ) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" ` +
        `height="${frame.height}" viewBox="0 0 ${frame.width} ${frame.height}" ` +
        `font-family="sans-serif" font-size="12">`,
      `<rect width="${frame.width}" height="${frame.height}" fill="white"/>`,
      `<text x="${frame.width / 2}" y="20" text-anchor="middle" font-size="15">` +
        `${escapeXml(title)}</text>`,
    );
  }

  get plotArea() {
    const { left, right, top, bottom, width, height } = this.frame;
    return { x0: left, x1: width - right, y0: height - bottom, y1: top };
  }

  drawAxes(xScale: Scale, yScale: Scale, xFmt = formatTick, yFmt = formatTick): void {
    const { x0, x1, y0, y1 } = this.plotArea;
    this.parts.push(
      `<g stroke="#222" fill="none">` +
        `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}"/>` +
        `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}"/></g>`,
    );
    for (const t of xScale.ticks) {
      const px = xScale(t);
      this.parts.push(
        `<line x1="${px.toFixed(2)}" y1="${y0}" x2="${px.toFixed(2)}" y2="${y0 + 5}" stroke="#222"/>`,
        `<text x="${px.toFixed(2)}" y="${y0 + 20}" text-anchor="middle">${escapeXml(xFmt(t))}</text>`,
      );
    }
    for (const t of yScale.ticks) {
      const py = yScale(t);
      this.parts.push(
        `<line x1="${x0 - 5}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="#222"/>`,
        `<text x="${x0 - 9}" y="${(py + 4).toFixed(2)}" text-anchor="end">${escapeXml(yFmt(t))}</text>`,
        `<line x1="${x0}" y1="${py.toFixed(2)}" x2="${x1}" y2="${py.toFixed(2)}" stroke="#ddd"/>`,
      );
    }
    const { width, height, bottom } = this.frame;
    this.parts.push(
      `<text x="${(x0 + x1) / 2}" y="${height - bottom / 4}" text-anchor="middle">` +
        `${escapeXml(this.xLabel)}</text>`,
      `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" ` +
        `transform="rotate(-90 18 ${(y0 + y1) / 2})">${escapeXml(this.yLabel)}</text>`,
    );
    void width;
  }

  /**
   * A point/line series. Every circle carries the source values as
   * data-x/data-y attributes: tests re-parse the image through them.
   */
  drawSeries(
    name: string,
    points: Array<{ x: number; y: number; px: number; py: number }>,
    color: string,
    step = false,
  ): void {
    const id = escapeXml(name);
    if (points.length > 0) {
      const coords: string[] = [];
      points.forEach((p, i) => {
        if (step && i > 0) {
          coords.push(`${p.px.toFixed(2)},${points[i - 1].py.toFixed(2)}`);
        }
        coords.push(`${p.px.toFixed(2)},${p.py.toFixed(2)}`);
      });
      this.parts.push(
        `<polyline fill="none" stroke="${color}" stroke-width="1.5" ` +
          `data-series="${id}" points="${coords.join(" ")}"/>`,
      );
    }
    this.parts.push(`<g data-series="${id}" fill="${color}">`);
    for (const p of points) {
      this.parts.push(
        `<circle cx="${p.px.toFixed(2)}" cy="${p.py.toFixed(2)}" r="2.5" ` +
          `data-x="${p.x}" data-y="${p.y}"/>`,
      );
    }
    this.parts.push("</g>");
  }

  drawLegend(entries: Array<{ name: string; color: string }>): void {
    const { x1, y1 } = this.plotArea;
    entries.forEach((entry, i) => {
      const y = y1 + 14 + i * 16;
      this.parts.push(
        `<rect x="${x1 - 150}" y="${y - 9}" width="12" height="12" fill="${entry.color}"/>`,
        `<text x="${x1 - 132}" y="${y + 1}">${escapeXml(entry.name)}</text>`,
      );
    });
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}
