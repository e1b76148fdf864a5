/**
 * Fixed figure styling. Everything that affects pixels lives here so
 * identical CSV input always produces byte-identical images.
 */

export interface Rgb {
  r: number;
  g: number;
  b: number;
}

export type MarkerKind = "circle" | "square" | "cross" | "none";

export interface SeriesStyle {
  color: Rgb;
  marker: MarkerKind;
}

export const FIGURE = {
  width: 880,
  height: 560,
  margin: { left: 90, right: 30, top: 40, bottom: 70 },
  background: { r: 255, g: 255, b: 255 },
  axis: { r: 40, g: 40, b: 40 },
  grid: { r: 225, g: 225, b: 225 },
  text: { r: 30, g: 30, b: 30 },
  fontScale: 2,
  smallFontScale: 1,
  markerSize: 4,
} as const;

/** Series palette, assigned by column order. */
export const SERIES: SeriesStyle[] = [
  { color: { r: 31, g: 119, b: 180 }, marker: "circle" },
  { color: { r: 214, g: 39, b: 40 }, marker: "square" },
  { color: { r: 44, g: 160, b: 44 }, marker: "cross" },
  { color: { r: 148, g: 103, b: 189 }, marker: "circle" },
  { color: { r: 255, g: 127, b: 14 }, marker: "square" },
  { color: { r: 23, g: 190, b: 207 }, marker: "cross" },
];

export function seriesStyle(index: number): SeriesStyle {
  return SERIES[index % SERIES.length];
}
