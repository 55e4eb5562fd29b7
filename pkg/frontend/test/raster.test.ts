import { describe, expect, it } from "vitest";
import { BLACK, Raster, TEXT_HEIGHT, WHITE, textWidth } from "../src/raster.js";

describe("Raster", () => {
  it("starts out filled with the background color", () => {
    const r = new Raster(3, 2);
    expect(r.get(0, 0)).toEqual([...WHITE]);
    expect(r.get(2, 1)).toEqual([...WHITE]);
  });

  it("rejects degenerate dimensions", () => {
    expect(() => new Raster(0, 5)).toThrow(/not positive/);
  });

  it("clips out-of-bounds writes instead of corrupting memory", () => {
    const r = new Raster(4, 4);
    r.set(-1, 0, BLACK);
    r.set(0, 99, BLACK);
    r.fillRect(2, 2, 10, 10, BLACK);
    expect(r.get(3, 3)).toEqual([...BLACK]);
    expect(r.get(0, 0)).toEqual([...WHITE]);
  });

  it("draws solid lines between both endpoints", () => {
    const r = new Raster(10, 10);
    r.line(1, 1, 8, 8, BLACK);
    expect(r.get(1, 1)).toEqual([...BLACK]);
    expect(r.get(8, 8)).toEqual([...BLACK]);
    expect(r.get(4, 4)).toEqual([...BLACK]);
  });

  it("skips pixels in the dash gaps", () => {
    const r = new Raster(20, 3);
    r.line(0, 1, 19, 1, BLACK, { on: 2, off: 2 });
    expect(r.get(0, 1)).toEqual([...BLACK]);
    expect(r.get(1, 1)).toEqual([...BLACK]);
    expect(r.get(2, 1)).toEqual([...WHITE]);
    expect(r.get(3, 1)).toEqual([...WHITE]);
    expect(r.get(4, 1)).toEqual([...BLACK]);
  });

  it("renders text as ink within the glyph box", () => {
    const r = new Raster(40, 12);
    r.text(2, 2, "A1", BLACK);
    let ink = 0;
    for (let y = 2; y < 2 + TEXT_HEIGHT; y++) {
      for (let x = 2; x < 2 + textWidth("A1"); x++) {
        if (r.get(x, y).join(",") === BLACK.join(",")) ink++;
      }
    }
    expect(ink).toBeGreaterThan(10);
  });

  it("measures text width consistently with rendering", () => {
    expect(textWidth("abc")).toBe(17);
    expect(textWidth("abc", 2)).toBe(34);
  });
});
