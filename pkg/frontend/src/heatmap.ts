/**
 * Outcome-rate heatmap over a two-parameter sweep.
 *
 * Every cell of a threshold-style summary carries target_fraction and
 * test_fraction coordinates; the cell color encodes over_threshold_rate
 * through a luminance-monotone ramp, so brighter always means a higher
 * rate. Cells whose replicates all failed get a flat no-data gray.
 */

import { NO_DATA, ramp } from "./colors.js";
import { PlotError, Rect, drawXTick, drawYTick, fmt, linearScale } from "./chart.js";
import { BLACK, Raster, TEXT_HEIGHT } from "./raster.js";
import type { Summary, ThresholdCell } from "./summary.js";

export interface HeatmapCellBox extends Rect {
  cellId: string;
  value: number | null;
}

export interface HeatmapLayout {
  width: number;
  height: number;
  plot: Rect;
  /** target_fraction values, ascending; row 0 sits at the bottom. */
  rows: number[];
  /** test_fraction values, ascending; column 0 sits at the left. */
  cols: number[];
  cells: HeatmapCellBox[];
  /** Grid slots no summary cell covered, painted in the no-data gray. */
  missing: Rect[];
}

const MARGIN = { left: 64, right: 96, top: 34, bottom: 46 };

function coord(cell: ThresholdCell, key: string): number {
  const v = Number(cell.coords[key]);
  if (!Number.isFinite(v)) {
    throw new PlotError(`cell ${cell.cell_id}: coords.${key} is missing or not a number`);
  }
  return v;
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, v));
}

export function renderHeatmap(summary: Summary): { raster: Raster; layout: HeatmapLayout } {
  if (summary.summary_kind === "time_average") {
    throw new PlotError("heatmap needs a threshold-style summary, not time averages");
  }
  const cells = summary.cells;
  const rows = uniqueSorted(cells.map((c) => coord(c, "target_fraction")));
  const cols = uniqueSorted(cells.map((c) => coord(c, "test_fraction")));
  const cellW = clamp(Math.floor(460 / cols.length), 12, 48);
  const cellH = clamp(Math.floor(460 / rows.length), 12, 48);
  const plot: Rect = {
    x: MARGIN.left,
    y: MARGIN.top,
    w: cellW * cols.length,
    h: cellH * rows.length,
  };
  const width = MARGIN.left + plot.w + MARGIN.right;
  const height = MARGIN.top + plot.h + MARGIN.bottom;
  const raster = new Raster(width, height);

  const colIndex = new Map(cols.map((v, i) => [v, i]));
  const rowIndex = new Map(rows.map((v, i) => [v, i]));
  const slot = (ci: number, ri: number): Rect => ({
    x: plot.x + ci * cellW,
    y: plot.y + plot.h - (ri + 1) * cellH,
    w: cellW,
    h: cellH,
  });
  const boxes: HeatmapCellBox[] = [];
  const covered = new Set<string>();
  for (const cell of cells) {
    const ci = colIndex.get(coord(cell, "test_fraction"))!;
    const ri = rowIndex.get(coord(cell, "target_fraction"))!;
    covered.add(`${ci},${ri}`);
    const box: HeatmapCellBox = {
      cellId: cell.cell_id,
      value: cell.over_threshold_rate,
      ...slot(ci, ri),
    };
    raster.fillRect(box.x, box.y, box.w, box.h, box.value === null ? NO_DATA : ramp(box.value));
    boxes.push(box);
  }
  const missing: Rect[] = [];
  for (let ci = 0; ci < cols.length; ci++) {
    for (let ri = 0; ri < rows.length; ri++) {
      if (!covered.has(`${ci},${ri}`)) {
        const box = slot(ci, ri);
        raster.fillRect(box.x, box.y, box.w, box.h, NO_DATA);
        missing.push(box);
      }
    }
  }

  const title = `${summary.preset}: fraction of runs with ${cells[0].label} >= ${fmt(cells[0].threshold)}`;
  raster.text(MARGIN.left, 6, title, BLACK);
  raster.text(MARGIN.left, 18, "y: target fraction   x: test fraction", BLACK);

  const colStride = Math.max(1, Math.ceil(cols.length / 8));
  for (let i = 0; i < cols.length; i += colStride) {
    drawXTick(raster, plot, plot.x + i * cellW + cellW / 2, fmt(cols[i]));
  }
  const rowStride = Math.max(1, Math.ceil(rows.length / 10));
  for (let i = 0; i < rows.length; i += rowStride) {
    drawYTick(raster, plot, plot.y + plot.h - i * cellH - cellH / 2, fmt(rows[i]));
  }

  // Color scale on the right, low at the bottom to match the ramp.
  const bar: Rect = { x: plot.x + plot.w + 18, y: plot.y, w: 14, h: plot.h };
  const toValue = linearScale(bar.y + bar.h - 1, bar.y, 0, 1);
  for (let y = bar.y; y < bar.y + bar.h; y++) {
    raster.fillRect(bar.x, y, bar.w, 1, ramp(toValue(y)));
  }
  raster.text(bar.x + bar.w + 4, bar.y, "1", BLACK);
  raster.text(bar.x + bar.w + 4, bar.y + bar.h - TEXT_HEIGHT, "0", BLACK);
  if (missing.length > 0 || boxes.some((b) => b.value === null)) {
    const y = bar.y + bar.h + 10;
    raster.fillRect(bar.x, y, bar.w, 8, NO_DATA);
    raster.text(bar.x + bar.w + 4, y, "n/a", BLACK);
  }

  return { raster, layout: { width, height, plot, rows, cols, cells: boxes, missing } };
}
