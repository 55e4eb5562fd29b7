/** Color ramps and series palettes. Everything here is deterministic. */

import type { Rgb } from "./raster.js";

const RAMP_LOW: Rgb = [25, 30, 90];
const RAMP_HIGH: Rgb = [250, 235, 85];

/**
 * Sequential ramp for heatmap cells. Each channel is linear in the
 * value and the endpoints were picked so luminance strictly increases
 * with it, which is what makes "darker = smaller" trustworthy.
 */
export function ramp(value: number): Rgb {
  const t = Math.min(1, Math.max(0, value));
  return [
    Math.round(RAMP_LOW[0] + t * (RAMP_HIGH[0] - RAMP_LOW[0])),
    Math.round(RAMP_LOW[1] + t * (RAMP_HIGH[1] - RAMP_LOW[1])),
    Math.round(RAMP_LOW[2] + t * (RAMP_HIGH[2] - RAMP_LOW[2])),
  ];
}

/** Cells with no usable value (all replicates failed). */
export const NO_DATA: Rgb = [225, 220, 215];

export function luminance(color: Rgb): number {
  return 0.2126 * color[0] + 0.7152 * color[1] + 0.0722 * color[2];
}

function hslToRgb(h: number, s: number, l: number): Rgb {
  const c = (1 - Math.abs(2 * l - 1)) * s;
  const hp = h / 60;
  const x = c * (1 - Math.abs((hp % 2) - 1));
  let r = 0;
  let g = 0;
  let b = 0;
  if (hp < 1) [r, g, b] = [c, x, 0];
  else if (hp < 2) [r, g, b] = [x, c, 0];
  else if (hp < 3) [r, g, b] = [0, c, x];
  else if (hp < 4) [r, g, b] = [0, x, c];
  else if (hp < 5) [r, g, b] = [x, 0, c];
  else [r, g, b] = [c, 0, x];
  const m = l - c / 2;
  return [Math.round((r + m) * 255), Math.round((g + m) * 255), Math.round((b + m) * 255)];
}

/**
 * The i-th series color: hues spaced by the golden angle never repeat,
 * so any number of time-series lines stay distinguishable.
 */
export function seriesColor(i: number): Rgb {
  return hslToRgb((i * 137.508) % 360, 0.62, 0.38);
}
