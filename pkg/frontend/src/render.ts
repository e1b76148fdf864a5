/**
 * Figure assembly: maps each figure kind onto the chart renderer and the
 * corresponding harness CSV schema.
 */

import * as fs from "node:fs";

import { renderChart, type Series } from "./chart.js";
import { column, hasColumn, parseCsv, requireColumns, SchemaError, type Table } from "./csv.js";

export const KINDS = ["nmse_vs_snr", "quant_noise", "waveform_overlay"] as const;
export type FigureKind = (typeof KINDS)[number];

export interface PlotSpec {
  kind: FigureKind;
  csvPath: string;
  outPath: string;
  xLabel?: string;
  yLabel?: string;
}

function sweepSeries(table: Table, axis: string, names: string[]): Series[] {
  const x = column(table, axis);
  return names
    .filter((name) => hasColumn(table, name))
    .map((name) => ({ name, x, y: column(table, name) }));
}

function buildNmseVsSnr(table: Table): { series: Series[]; xLabel: string } {
  const axis = table.columns[0];
  requireColumns(table, [axis, "chan_nmse_mean"]);
  const series = sweepSeries(table, axis, [
    "chan_nmse_mean",
    "nmse_si_proposed_mean",
    "nmse_si_nlms_mean",
  ]);
  return { series, xLabel: axis };
}

function buildQuantNoise(table: Table): { series: Series[]; xLabel: string } {
  requireColumns(table, ["bits", "sigma_conventional", "sigma_modulo"]);
  const names = ["sigma_conventional", "sigma_modulo"];
  for (const mc of ["sigma_conventional_mc", "sigma_modulo_mc"]) {
    if (hasColumn(table, mc) && column(table, mc).some(Number.isFinite)) {
      names.push(mc);
    }
  }
  return { series: sweepSeries(table, "bits", names), xLabel: "bits" };
}

function buildWaveformOverlay(table: Table): { series: Series[]; xLabel: string } {
  requireColumns(table, ["k", "truth", "folded", "recovered"]);
  return {
    series: sweepSeries(table, "k", ["truth", "folded", "recovered"]),
    xLabel: "k",
  };
}

/** Render the figure described by `spec`; the output file is written only
 * after the full image has been produced. */
export function render(spec: PlotSpec): void {
  if (!KINDS.includes(spec.kind)) {
    throw new SchemaError(`unknown figure kind '${spec.kind}' (expected ${KINDS.join(" | ")})`);
  }
  const table = parseCsv(fs.readFileSync(spec.csvPath, "utf-8"));
  let series: Series[];
  let xLabel: string;
  let yLabel: string;
  let yLog: boolean;
  let markers = true;
  switch (spec.kind) {
    case "nmse_vs_snr": {
      ({ series, xLabel } = buildNmseVsSnr(table));
      yLabel = "NMSE";
      yLog = true;
      break;
    }
    case "quant_noise": {
      ({ series, xLabel } = buildQuantNoise(table));
      yLabel = "quantization noise";
      yLog = true;
      break;
    }
    default: {
      ({ series, xLabel } = buildWaveformOverlay(table));
      yLabel = "amplitude";
      yLog = false;
      markers = false;
      break;
    }
  }
  const raster = renderChart({
    series,
    xLabel: spec.xLabel ?? xLabel,
    yLabel: spec.yLabel ?? yLabel,
    yLog,
    markers,
  });
  fs.writeFileSync(spec.outPath, raster.toPng());
}
