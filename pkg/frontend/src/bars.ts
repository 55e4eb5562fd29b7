/**
 * Grouped bar chart of time-averaged populations on a log axis.
 *
 * Each time-average summary becomes one panel; inside a panel, cells
 * group by coords.seeds and color by coords.amplifiers (falling back to
 * one gray bar per cell when those coords are absent). Log axes cannot
 * show zero, so zero and no-data values sit clamped at the axis floor
 * with a small annotation instead of vanishing.
 */

import { seriesColor } from "./colors.js";
import {
  PlotError,
  Rect,
  decadeTicks,
  drawXTick,
  drawYTick,
  fmt,
  logScale,
} from "./chart.js";
import { BLACK, GRAY, Raster, Rgb, TEXT_HEIGHT, textWidth } from "./raster.js";
import type { Summary, TimeAverageSummary } from "./summary.js";

export interface BarsOptions {
  /** Motif to chart; defaults per panel to the first averaged motif. */
  label?: string;
}

export interface BarBox {
  panel: number;
  cellId: string;
  group: string;
  series: string;
  value: number | null;
  clamped: boolean;
  rect: Rect;
}

export interface BarsLayout {
  width: number;
  height: number;
  panels: { label: string; plot: Rect }[];
  bars: BarBox[];
  /** Log-axis floor that clamped bars sit on. */
  floor: number;
  legend: { name: string; color: Rgb }[];
}

const BAR_W = 18;
const BAR_GAP = 2;
const GROUP_GAP = 16;
const PANEL_GAP = 30;
const PLOT_H = 300;
const MARGIN = { left: 62, right: 16, top: 34, bottom: 48 };
const CLAMP_H = 2; // visible sliver for values the log axis cannot place

interface PanelData {
  label: string;
  groups: string[];
  // group -> series -> value
  values: Map<string, Map<string, { cellId: string; value: number | null }>>;
}

function collect(summaries: TimeAverageSummary[], wanted?: string): {
  panels: PanelData[];
  seriesNames: string[];
  hasSeriesCoord: boolean;
} {
  const seriesNames: string[] = [];
  let hasSeriesCoord = false;
  const panels = summaries.map((summary, pi) => {
    const label = wanted ?? Object.keys(summary.cells[0].time_averages)[0];
    if (label === undefined) {
      throw new PlotError(`panel ${pi}: summary has no time averages`);
    }
    const groups: string[] = [];
    const values: PanelData["values"] = new Map();
    for (const cell of summary.cells) {
      if (!(label in cell.time_averages)) {
        throw new PlotError(`panel ${pi} cell ${cell.cell_id}: no motif ${JSON.stringify(label)}`);
      }
      const group = cell.coords.seeds !== undefined ? String(cell.coords.seeds) : cell.cell_id;
      const series = cell.coords.amplifiers !== undefined ? String(cell.coords.amplifiers) : "";
      if (series !== "") {
        hasSeriesCoord = true;
      }
      if (!values.has(group)) {
        groups.push(group);
        values.set(group, new Map());
      }
      values.get(group)!.set(series, { cellId: cell.cell_id, value: cell.time_averages[label] });
      if (!seriesNames.includes(series)) {
        seriesNames.push(series);
      }
    }
    return { label, groups, values };
  });
  return { panels, seriesNames, hasSeriesCoord };
}

export function renderBars(
  summaries: Summary[],
  opts: BarsOptions = {},
): { raster: Raster; layout: BarsLayout } {
  if (summaries.length === 0) {
    throw new PlotError("no summaries to plot");
  }
  for (const s of summaries) {
    if (s.summary_kind !== "time_average") {
      throw new PlotError("bars need time-average summaries");
    }
  }
  const { panels, seriesNames, hasSeriesCoord } = collect(
    summaries as TimeAverageSummary[],
    opts.label,
  );

  const allValues = panels.flatMap((p) =>
    [...p.values.values()].flatMap((m) => [...m.values()].map((e) => e.value)),
  );
  const positives = allValues.filter((v): v is number => v !== null && v > 0);
  const floor = positives.length
    ? 10 ** (Math.floor(Math.log10(Math.min(...positives))) - 1)
    : 1e-6;
  const top = positives.length ? 10 ** Math.ceil(Math.log10(Math.max(...positives)) + 1e-9) : 1;

  const groupWidth = seriesNames.length * (BAR_W + BAR_GAP) - BAR_GAP;
  const panelRects: Rect[] = [];
  let x = MARGIN.left;
  for (const panel of panels) {
    const w = panel.groups.length * (groupWidth + GROUP_GAP) + GROUP_GAP;
    panelRects.push({ x, y: MARGIN.top, w, h: PLOT_H });
    x += w + PANEL_GAP;
  }
  const width = x - PANEL_GAP + MARGIN.right;
  const height = MARGIN.top + PLOT_H + MARGIN.bottom;
  const raster = new Raster(width, height);
  const sy = logScale(floor, top, MARGIN.top + PLOT_H, MARGIN.top);

  raster.text(MARGIN.left, 6, "time-averaged population fraction (log scale)", BLACK);

  const bars: BarBox[] = [];
  panels.forEach((panel, pi) => {
    const plot = panelRects[pi];
    raster.line(plot.x, plot.y, plot.x, plot.y + plot.h, BLACK);
    raster.line(plot.x, plot.y + plot.h, plot.x + plot.w, plot.y + plot.h, BLACK);
    raster.text(
      Math.round(plot.x + plot.w / 2 - textWidth(panel.label) / 2),
      plot.y - 12,
      panel.label,
      BLACK,
    );
    for (const t of decadeTicks(floor, top)) {
      const py = Math.round(sy(t));
      if (pi === 0) {
        drawYTick(raster, plot, py, fmt(t));
      } else {
        raster.line(plot.x - 3, py, plot.x, py, BLACK);
      }
    }
    panel.groups.forEach((group, gi) => {
      const gx = plot.x + GROUP_GAP + gi * (groupWidth + GROUP_GAP);
      drawXTick(raster, plot, Math.round(gx + groupWidth / 2), group.slice(0, 12));
      seriesNames.forEach((series, si) => {
        const entry = panel.values.get(group)!.get(series);
        if (entry === undefined) {
          return; // this group simply has no bar for that series
        }
        const bx = gx + si * (BAR_W + BAR_GAP);
        const base = plot.y + plot.h;
        const clamped = entry.value === null || entry.value <= floor;
        const barTop = clamped ? base - CLAMP_H : Math.round(sy(entry.value!));
        const rect: Rect = { x: bx, y: barTop, w: BAR_W, h: base - barTop };
        const color = hasSeriesCoord ? seriesColor(seriesNames.indexOf(series)) : GRAY;
        raster.fillRect(rect.x, rect.y, rect.w, rect.h, color);
        if (clamped) {
          const note = entry.value === null ? "n/a" : "0";
          raster.text(
            Math.round(bx + BAR_W / 2 - textWidth(note) / 2),
            barTop - TEXT_HEIGHT - 2,
            note,
            BLACK,
          );
        }
        bars.push({
          panel: pi,
          cellId: entry.cellId,
          group,
          series,
          value: entry.value,
          clamped,
          rect,
        });
      });
    });
  });

  const legend = hasSeriesCoord
    ? seriesNames.map((name, i) => ({ name, color: seriesColor(i) }))
    : [];
  legend.forEach((item, i) => {
    const lx = width - MARGIN.right - 120;
    const ly = MARGIN.top + 4 + i * (TEXT_HEIGHT + 4);
    raster.fillRect(lx, ly, 10, TEXT_HEIGHT, item.color);
    raster.text(lx + 14, ly, item.name.slice(0, 16), BLACK);
  });

  return {
    raster,
    layout: {
      width,
      height,
      panels: panels.map((p, i) => ({ label: p.label, plot: panelRects[i] })),
      bars,
      floor,
      legend,
    },
  };
}
