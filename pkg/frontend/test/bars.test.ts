import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { renderBars } from "../src/bars.js";
import { PlotError } from "../src/chart.js";
import { BLACK } from "../src/raster.js";
import { readSummary } from "../src/summary.js";
import type { Summary } from "../src/summary.js";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

function fixtureSummaries(): Summary[] {
  return ["successor", "add2", "addition"].map((name) =>
    readSummary(join(FIXTURES, `bars/${name}/summary.json`)),
  );
}

function makeTimeAverage(
  cells: { id: string; coords?: Record<string, string | number>; averages: Record<string, number | null> }[],
): Summary {
  return {
    preset: "synthetic",
    config_hash: "0".repeat(64),
    summary_kind: "time_average",
    cells: cells.map((c) => ({
      cell_id: c.id,
      coords: c.coords ?? {},
      replicates_ok: 1,
      replicates_failed: 0,
      time_averages: c.averages,
    })),
  };
}

describe("renderBars", () => {
  it("draws one panel per summary with its own motif label", () => {
    const { layout } = renderBars(fixtureSummaries());
    expect(layout.panels.map((p) => p.label)).toEqual(["scc", "add2", "add"]);
    for (let i = 1; i < layout.panels.length; i++) {
      const prev = layout.panels[i - 1].plot;
      expect(layout.panels[i].plot.x).toBeGreaterThan(prev.x + prev.w);
    }
  });

  it("draws one bar per cell, grouped by seed set", () => {
    const { layout } = renderBars(fixtureSummaries());
    expect(layout.bars).toHaveLength(12);
    for (const panel of [0, 1, 2]) {
      const bars = layout.bars.filter((b) => b.panel === panel);
      expect(bars).toHaveLength(4);
      expect(new Set(bars.map((b) => b.group))).toEqual(new Set(["SKI", "SKIP"]));
    }
    expect(layout.legend.map((l) => l.name)).toEqual([
      "none",
      "successor",
      "add2",
      "addition",
    ]);
  });

  it("clamps zero values to the axis floor and annotates them", () => {
    const { raster, layout } = renderBars(fixtureSummaries());
    const clamped = layout.bars.filter((b) => b.clamped);
    expect(clamped.length).toBeGreaterThan(0);
    for (const bar of clamped) {
      expect(bar.value === null || bar.value === 0).toBe(true);
      // the sliver sits on the axis floor rather than disappearing
      const base = layout.panels[bar.panel].plot.y + layout.panels[bar.panel].plot.h;
      expect(bar.rect.y + bar.rect.h).toBe(base);
      expect(bar.rect.h).toBeGreaterThan(0);
      expect(bar.rect.h).toBeLessThanOrEqual(3);
      // and carries a drawn annotation right above it
      let annotated = false;
      for (let y = bar.rect.y - 10; y < bar.rect.y - 1 && !annotated; y++) {
        for (let x = bar.rect.x; x < bar.rect.x + bar.rect.w; x++) {
          if (raster.get(x, y).join(",") === BLACK.join(",")) {
            annotated = true;
            break;
          }
        }
      }
      expect(annotated).toBe(true);
    }
    const solid = layout.bars.filter((b) => !b.clamped);
    expect(solid.length).toBeGreaterThan(0);
  });

  it("orders bar tops by value on the log axis", () => {
    const summary = makeTimeAverage([
      { id: "a", coords: { seeds: "a" }, averages: { m: 1e-4 } },
      { id: "b", coords: { seeds: "b" }, averages: { m: 1e-2 } },
      { id: "c", coords: { seeds: "c" }, averages: { m: 1 } },
    ]);
    const { layout } = renderBars([summary]);
    const tops = new Map(layout.bars.map((b) => [b.cellId, b.rect.y]));
    expect(tops.get("c")!).toBeLessThan(tops.get("b")!);
    expect(tops.get("b")!).toBeLessThan(tops.get("a")!);
    expect(layout.floor).toBeLessThan(1e-4);
  });

  it("falls back to one bar per cell without grid coords", () => {
    const summary = makeTimeAverage([
      { id: "first", averages: { m: 0.5 } },
      { id: "second", averages: { m: 0.05 } },
    ]);
    const { layout } = renderBars([summary]);
    expect(layout.bars).toHaveLength(2);
    expect(layout.bars.map((b) => b.group)).toEqual(["first", "second"]);
    expect(layout.legend).toEqual([]);
  });

  it("draws a single cell as a single bar", () => {
    const { layout } = renderBars([makeTimeAverage([{ id: "only", averages: { m: 0.3 } }])]);
    expect(layout.bars).toHaveLength(1);
    expect(layout.bars[0].clamped).toBe(false);
  });

  it("marks missing averages as clamped no-data bars", () => {
    const summary = makeTimeAverage([
      { id: "a", averages: { m: null } },
      { id: "b", averages: { m: 0.2 } },
    ]);
    const { layout } = renderBars([summary]);
    const bar = layout.bars.find((b) => b.cellId === "a")!;
    expect(bar.clamped).toBe(true);
    expect(bar.value).toBeNull();
  });

  it("rejects threshold summaries", () => {
    const summary = readSummary(join(FIXTURES, "heatmap/summary.json"));
    expect(() => renderBars([summary])).toThrow(PlotError);
  });

  it("rejects an empty summary list", () => {
    expect(() => renderBars([])).toThrow(PlotError);
  });

  it("rejects a label absent from a panel", () => {
    expect(() => renderBars(fixtureSummaries(), { label: "nope" })).toThrow(/nope/);
  });

  it("charts a shared label across panels when asked", () => {
    const { layout } = renderBars(fixtureSummaries(), { label: "scc" });
    expect(layout.panels.map((p) => p.label)).toEqual(["scc", "scc", "scc"]);
  });

  it("renders byte-identically for the same summaries", () => {
    const a = renderBars(fixtureSummaries());
    const b = renderBars(fixtureSummaries());
    expect(Buffer.from(a.raster.data).equals(Buffer.from(b.raster.data))).toBe(true);
  });

  it("does not mutate its input", () => {
    const summaries = fixtureSummaries();
    const before = structuredClone(summaries);
    renderBars(summaries);
    expect(summaries).toEqual(before);
  });
});
