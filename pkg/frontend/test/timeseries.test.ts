import { readdirSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { PlotError } from "../src/chart.js";
import { readPopulationCsv } from "../src/csv.js";
import type { PopulationSeries } from "../src/csv.js";
import { GRAY, WHITE } from "../src/raster.js";
import { renderTimeseries } from "../src/timeseries.js";
import type { SeriesInput } from "../src/timeseries.js";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));
const RUN = join(FIXTURES, "run-successor/cells/successor");

function fixtureInputs(): SeriesInput[] {
  return readdirSync(RUN)
    .filter((name) => name.endsWith(".csv"))
    .sort()
    .map((name) => ({ name, data: readPopulationCsv(join(RUN, name)) }));
}

function syntheticSeries(counts: number[], soup = 100, step = 500): PopulationSeries {
  return {
    labels: ["scc"],
    collisions: counts.map((_, i) => (i + 1) * step),
    counts: new Map([["scc", counts]]),
    soupSizes: counts.map(() => soup),
  };
}

describe("renderTimeseries", () => {
  it("draws one polyline per input CSV", () => {
    const inputs = fixtureInputs();
    expect(inputs).toHaveLength(16);
    const { layout } = renderTimeseries(inputs, { perturbEvery: 5000 });
    expect(layout.series).toHaveLength(16);
    for (const series of layout.series) {
      expect(series.points).toHaveLength(40);
    }
    const colors = new Set(layout.series.map((s) => s.color.join(",")));
    expect(colors.size).toBe(16);
    expect(layout.label).toBe("scc");
  });

  it("places dashed markers at every multiple of the perturbation interval", () => {
    const { layout } = renderTimeseries(fixtureInputs(), { perturbEvery: 5000 });
    expect(layout.markers.map((m) => m.collision)).toEqual([5000, 10000, 15000, 20000]);
    for (const marker of layout.markers) {
      expect(marker.px).toBeGreaterThanOrEqual(layout.plot.x);
      expect(marker.px).toBeLessThanOrEqual(layout.plot.x + layout.plot.w);
    }
  });

  it("draws the markers dashed, not solid", () => {
    // a tall flat line pins the y-domain so the mid-plot region stays clear
    const inputs: SeriesInput[] = [
      { name: "top", data: syntheticSeries([100, 100, 100]) },
      { name: "low", data: syntheticSeries([0, 0, 0]) },
    ];
    const { raster, layout } = renderTimeseries(inputs, { perturbEvery: 750 });
    expect(layout.markers).toHaveLength(2);
    const px = layout.markers[0].px;
    const mid = layout.plot.y + Math.floor(layout.plot.h / 2);
    const column = [];
    for (let y = mid - 6; y <= mid + 6; y++) {
      column.push(raster.get(px, y).join(","));
    }
    expect(column).toContain(GRAY.join(","));
    expect(column).toContain(WHITE.join(","));
  });

  it("keeps a flat all-zero series on the axis baseline", () => {
    const input = { name: "flat.csv", data: readPopulationCsv(join(FIXTURES, "flat.csv")) };
    const { layout } = renderTimeseries([input]);
    expect(layout.yDomain).toEqual([0, 1]);
    const bottom = layout.plot.y + layout.plot.h;
    for (const [, py] of layout.series[0].points) {
      expect(py).toBe(bottom);
    }
  });

  it("rejects an empty input list", () => {
    expect(() => renderTimeseries([])).toThrow(PlotError);
  });

  it("rejects a label missing from any input", () => {
    const inputs = [{ name: "only.csv", data: syntheticSeries([1, 2, 3]) }];
    expect(() => renderTimeseries(inputs, { label: "nope" })).toThrow(/only\.csv/);
  });

  it("rejects a non-positive perturbation interval", () => {
    const inputs = [{ name: "x", data: syntheticSeries([1]) }];
    expect(() => renderTimeseries(inputs, { perturbEvery: 0 })).toThrow(PlotError);
  });

  it("renders byte-identically for the same inputs", () => {
    const a = renderTimeseries(fixtureInputs(), { perturbEvery: 5000 });
    const b = renderTimeseries(fixtureInputs(), { perturbEvery: 5000 });
    expect(Buffer.from(a.raster.data).equals(Buffer.from(b.raster.data))).toBe(true);
  });

  it("does not mutate its inputs", () => {
    const inputs = fixtureInputs().slice(0, 3);
    const before = structuredClone(inputs);
    renderTimeseries(inputs, { perturbEvery: 5000 });
    expect(inputs).toEqual(before);
  });
});
