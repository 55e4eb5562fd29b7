import { describe, expect, it } from "vitest";
import { NO_DATA, luminance, ramp, seriesColor } from "../src/colors.js";

describe("ramp", () => {
  it("has strictly increasing luminance, so brighter always means more", () => {
    let previous = -1;
    for (let i = 0; i <= 200; i++) {
      const lum = luminance(ramp(i / 200));
      expect(lum).toBeGreaterThan(previous);
      previous = lum;
    }
  });

  it("clamps values outside [0, 1]", () => {
    expect(ramp(-0.5)).toEqual(ramp(0));
    expect(ramp(7)).toEqual(ramp(1));
  });

  it("keeps the no-data gray away from every ramp color", () => {
    for (let i = 0; i <= 100; i++) {
      const [r, g, b] = ramp(i / 100);
      const distance =
        Math.abs(r - NO_DATA[0]) + Math.abs(g - NO_DATA[1]) + Math.abs(b - NO_DATA[2]);
      expect(distance).toBeGreaterThan(30);
    }
  });
});

describe("seriesColor", () => {
  it("gives distinct colors to the first twenty series", () => {
    const seen = new Set<string>();
    for (let i = 0; i < 20; i++) {
      seen.add(seriesColor(i).join(","));
    }
    expect(seen.size).toBe(20);
  });

  it("is deterministic", () => {
    expect(seriesColor(3)).toEqual(seriesColor(3));
  });
});
