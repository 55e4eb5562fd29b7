/**
 * Population fraction over collisions, one line per replicate CSV.
 *
 * The y value is count / soup_size for the chosen motif (default: the
 * first motif of the first input, which must appear in every input).
 * Dashed vertical markers show where the perturbation schedule fires.
 */

import { seriesColor } from "./colors.js";
import {
  PlotError,
  Rect,
  drawFrame,
  drawXTick,
  drawYTick,
  fmt,
  linearScale,
  niceTicks,
} from "./chart.js";
import type { PopulationSeries } from "./csv.js";
import { BLACK, GRAY, Raster, Rgb, TEXT_HEIGHT, textWidth } from "./raster.js";

export interface SeriesInput {
  /** Display name, usually the CSV path. */
  name: string;
  data: PopulationSeries;
}

export interface TimeseriesOptions {
  label?: string;
  /** Collisions between perturbations; omit to draw no markers. */
  perturbEvery?: number;
}

export interface TimeseriesLayout {
  width: number;
  height: number;
  plot: Rect;
  label: string;
  yDomain: [number, number];
  series: { name: string; color: Rgb; points: [number, number][] }[];
  markers: { collision: number; px: number }[];
}

const WIDTH = 640;
const HEIGHT = 400;
const MARGIN = { left: 62, right: 16, top: 30, bottom: 46 };
const LEGEND_LIMIT = 6; // past this many lines a legend is just clutter

export function renderTimeseries(
  inputs: SeriesInput[],
  opts: TimeseriesOptions = {},
): { raster: Raster; layout: TimeseriesLayout } {
  if (inputs.length === 0) {
    throw new PlotError("no input series to plot");
  }
  if (opts.perturbEvery !== undefined && !(opts.perturbEvery > 0)) {
    throw new PlotError("perturbation interval must be positive");
  }
  const label = opts.label ?? inputs[0].data.labels[0];
  for (const input of inputs) {
    if (!input.data.counts.has(label)) {
      throw new PlotError(`${input.name}: CSV has no motif ${JSON.stringify(label)}`);
    }
  }

  let maxX = 0;
  let maxFraction = 0;
  const fractions = inputs.map((input) => {
    const counts = input.data.counts.get(label)!;
    return input.data.collisions.map((collision, i) => {
      const fraction = counts[i] / input.data.soupSizes[i];
      maxX = Math.max(maxX, collision);
      maxFraction = Math.max(maxFraction, fraction);
      return [collision, fraction] as [number, number];
    });
  });
  // All-zero inputs still deserve a visible baseline, hence the [0, 1] fallback.
  const yDomain: [number, number] = maxFraction > 0 ? [0, maxFraction * 1.05] : [0, 1];

  const plot: Rect = {
    x: MARGIN.left,
    y: MARGIN.top,
    w: WIDTH - MARGIN.left - MARGIN.right,
    h: HEIGHT - MARGIN.top - MARGIN.bottom,
  };
  const sx = linearScale(0, maxX || 1, plot.x, plot.x + plot.w);
  const sy = linearScale(yDomain[0], yDomain[1], plot.y + plot.h, plot.y);
  const raster = new Raster(WIDTH, HEIGHT);

  raster.text(plot.x, 6, `${label} / soup size over collisions`, BLACK);
  drawFrame(raster, plot);
  for (const t of niceTicks(0, maxX || 1, 6)) {
    drawXTick(raster, plot, Math.round(sx(t)), fmt(t));
  }
  for (const t of niceTicks(yDomain[0], yDomain[1], 5)) {
    drawYTick(raster, plot, Math.round(sy(t)), fmt(t));
  }
  raster.text(plot.x + plot.w - textWidth("collisions"), plot.y + plot.h + 20, "collisions", BLACK);

  const markers: { collision: number; px: number }[] = [];
  if (opts.perturbEvery) {
    for (let c = opts.perturbEvery; c <= maxX; c += opts.perturbEvery) {
      const px = Math.round(sx(c));
      raster.line(px, plot.y, px, plot.y + plot.h, GRAY, { on: 3, off: 3 });
      markers.push({ collision: c, px });
    }
  }

  const series = inputs.map((input, i) => {
    const color = seriesColor(i);
    const points = fractions[i].map(
      ([c, f]) => [Math.round(sx(c)), Math.round(sy(f))] as [number, number],
    );
    for (let p = 1; p < points.length; p++) {
      raster.line(points[p - 1][0], points[p - 1][1], points[p][0], points[p][1], color);
    }
    if (points.length === 1) {
      raster.set(points[0][0], points[0][1], color);
    }
    return { name: input.name, color, points };
  });

  if (series.length <= LEGEND_LIMIT) {
    series.forEach((s, i) => {
      const y = plot.y + 6 + i * (TEXT_HEIGHT + 4);
      const x = plot.x + plot.w - 150;
      raster.fillRect(x, y, 10, TEXT_HEIGHT, s.color);
      raster.text(x + 14, y, s.name.slice(-22), BLACK);
    });
  }

  return {
    raster,
    layout: { width: WIDTH, height: HEIGHT, plot, label, yDomain, series, markers },
  };
}
