/** Scales, tick generation and frame drawing shared by the chart types. */

import { BLACK, Raster, TEXT_HEIGHT, textWidth } from "./raster.js";

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

/** Bad or inconsistent chart input (wrong summary kind, missing motif, ...). */
export class PlotError extends Error {}

export type Scale = (value: number) => number;

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  return (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0);
}

export function fmt(v: number): string {
  if (v === 0) {
    return "0";
  }
  if (Number.isInteger(v) && Math.abs(v) < 1e6) {
    return String(v);
  }
  if (Math.abs(v) >= 0.01 && Math.abs(v) < 1e4) {
    return String(Number(v.toPrecision(3)));
  }
  return v.toExponential(0).replace("e+", "e");
}

/** Round tick positions covering [min, max], roughly `count` of them. */
export function niceTicks(min: number, max: number, count = 5): number[] {
  if (!(max > min)) {
    return [min];
  }
  const step0 = (max - min) / Math.max(1, count);
  const mag = 10 ** Math.floor(Math.log10(step0));
  const norm = step0 / mag;
  const step = (norm > 5 ? 10 : norm > 2 ? 5 : norm > 1 ? 2 : 1) * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

/** Powers of ten inside [min, max]. */
export function decadeTicks(min: number, max: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(min) - 1e-9); 10 ** e <= max * (1 + 1e-9); e++) {
    ticks.push(10 ** e);
  }
  return ticks;
}

export function drawFrame(r: Raster, plot: Rect): void {
  r.line(plot.x, plot.y + plot.h, plot.x + plot.w, plot.y + plot.h, BLACK);
  r.line(plot.x, plot.y, plot.x, plot.y + plot.h, BLACK);
}

export function drawXTick(r: Raster, plot: Rect, px: number, label: string): void {
  const base = plot.y + plot.h;
  r.line(px, base, px, base + 3, BLACK);
  r.text(Math.round(px - textWidth(label) / 2), base + 6, label, BLACK);
}

export function drawYTick(r: Raster, plot: Rect, py: number, label: string): void {
  r.line(plot.x - 3, py, plot.x, py, BLACK);
  r.text(plot.x - 6 - textWidth(label), Math.round(py - TEXT_HEIGHT / 2), label, BLACK);
}
