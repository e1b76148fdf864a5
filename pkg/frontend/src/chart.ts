/**
 * Line chart rendering: linear/log axes, grid, ticks, legend.
 */

import { textWidth } from "./font.js";
import { Raster } from "./raster.js";
import { FIGURE, seriesStyle } from "./style.js";

export interface Series {
  name: string;
  x: number[];
  y: number[];
}

export interface ChartSpec {
  series: Series[];
  xLabel: string;
  yLabel: string;
  yLog: boolean;
  /** Suppress markers for dense traces. */
  markers?: boolean;
}

interface Scale {
  (value: number): number;
}

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-12 * span; v += chosen) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks.length > 0 ? ticks : [lo];
}

function formatTick(value: number, log: boolean): string {
  if (log) {
    const e = Math.round(Math.log10(value));
    return `1e${e}`;
  }
  if (value === 0) return "0";
  const a = Math.abs(value);
  if (a >= 1e4 || a < 1e-3) return value.toExponential(0).replace("e+", "e");
  return Number(value.toPrecision(6)).toString();
}

export function renderChart(spec: ChartSpec): Raster {
  const { width, height, margin } = FIGURE;
  const raster = new Raster(width, height, FIGURE.background);
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const x0 = margin.left;
  const y0 = margin.top;

  // data extent over finite points only
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const s of spec.series) {
    for (let i = 0; i < s.x.length; i++) {
      const xv = s.x[i];
      const yv = s.y[i];
      if (!Number.isFinite(xv) || !Number.isFinite(yv)) continue;
      if (spec.yLog && yv <= 0) continue;
      xMin = Math.min(xMin, xv);
      xMax = Math.max(xMax, xv);
      yMin = Math.min(yMin, yv);
      yMax = Math.max(yMax, yv);
    }
  }
  if (!Number.isFinite(xMin) || !Number.isFinite(yMin)) {
    throw new Error("no finite data points to plot");
  }
  if (xMax === xMin) {
    xMax = xMin + 1;
  }
  if (yMax === yMin) {
    yMax = spec.yLog ? yMin * 10 : yMin + 1;
    if (!spec.yLog) yMin -= 1;
  }
  if (!spec.yLog) {
    const pad = 0.05 * (yMax - yMin);
    yMin -= pad;
    yMax += pad;
  }

  const sx: Scale = (v) => x0 + ((v - xMin) / (xMax - xMin)) * plotW;
  const sy: Scale = spec.yLog
    ? (v) => y0 + plotH - ((Math.log10(v) - Math.log10(yMin)) / (Math.log10(yMax) - Math.log10(yMin))) * plotH
    : (v) => y0 + plotH - ((v - yMin) / (yMax - yMin)) * plotH;

  // grid + ticks
  const xTicks = niceTicks(xMin, xMax, 8);
  const yTicks = spec.yLog ? decadeTicks(yMin, yMax) : niceTicks(yMin, yMax, 8);
  for (const t of xTicks) {
    const px = sx(t);
    raster.line(px, y0, px, y0 + plotH, FIGURE.grid);
    raster.line(px, y0 + plotH, px, y0 + plotH + 4, FIGURE.axis);
    raster.textCentered(px, y0 + plotH + 10, formatTick(t, false), FIGURE.text, FIGURE.smallFontScale + 1);
  }
  for (const t of yTicks) {
    const py = sy(t);
    raster.line(x0, py, x0 + plotW, py, FIGURE.grid);
    raster.line(x0 - 4, py, x0, py, FIGURE.axis);
    raster.textRight(x0 - 8, py - 4, formatTick(t, spec.yLog), FIGURE.text, FIGURE.smallFontScale + 1);
  }

  // frame
  raster.line(x0, y0, x0, y0 + plotH, FIGURE.axis, 1);
  raster.line(x0, y0 + plotH, x0 + plotW, y0 + plotH, FIGURE.axis, 1);
  raster.line(x0 + plotW, y0, x0 + plotW, y0 + plotH, FIGURE.axis, 1);
  raster.line(x0, y0, x0 + plotW, y0, FIGURE.axis, 1);

  // series
  spec.series.forEach((s, idx) => {
    const style = seriesStyle(idx);
    let prev: { px: number; py: number } | null = null;
    for (let i = 0; i < s.x.length; i++) {
      const xv = s.x[i];
      const yv = s.y[i];
      if (!Number.isFinite(xv) || !Number.isFinite(yv) || (spec.yLog && yv <= 0)) {
        prev = null;
        continue;
      }
      const px = sx(xv);
      const py = sy(yv);
      if (prev) raster.line(prev.px, prev.py, px, py, style.color, 2);
      if (spec.markers !== false) {
        raster.marker(px, py, style.marker, FIGURE.markerSize, style.color);
      }
      prev = { px, py };
    }
  });

  // axis labels
  raster.textCentered(x0 + plotW / 2, height - 24, spec.xLabel, FIGURE.text, FIGURE.fontScale);
  raster.textVertical(14, y0 + plotH / 2, spec.yLabel, FIGURE.text, FIGURE.fontScale);

  // legend (top-right, inside the frame)
  const scale = FIGURE.smallFontScale + 1;
  const entryH = 16;
  const legendW =
    Math.max(...spec.series.map((s) => textWidth(s.name, scale))) + 36;
  const legendH = spec.series.length * entryH + 8;
  const lx = x0 + plotW - legendW - 8;
  const ly = y0 + 8;
  raster.fillRect(lx, ly, legendW, legendH, FIGURE.background);
  raster.line(lx, ly, lx + legendW, ly, FIGURE.axis);
  raster.line(lx, ly + legendH, lx + legendW, ly + legendH, FIGURE.axis);
  raster.line(lx, ly, lx, ly + legendH, FIGURE.axis);
  raster.line(lx + legendW, ly, lx + legendW, ly + legendH, FIGURE.axis);
  spec.series.forEach((s, idx) => {
    const style = seriesStyle(idx);
    const cy = ly + 8 + idx * entryH + 4;
    raster.line(lx + 6, cy, lx + 24, cy, style.color, 2);
    raster.marker(lx + 15, cy, style.marker, 3, style.color);
    raster.text(lx + 30, cy - 5, s.name, FIGURE.text, scale);
  });

  return raster;
}
