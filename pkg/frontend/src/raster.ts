/** In-memory RGB canvas with the handful of drawing ops the plots need. */

import { GLYPH_HEIGHT, GLYPH_WIDTH, glyph } from "./font.js";

export type Rgb = readonly [number, number, number];

export const WHITE: Rgb = [255, 255, 255];
export const BLACK: Rgb = [0, 0, 0];
export const GRAY: Rgb = [150, 150, 150];

export interface DashPattern {
  on: number;
  off: number;
}

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number, background: Rgb = WHITE) {
    if (width < 1 || height < 1) {
      throw new Error(`raster dimensions ${width}x${height} are not positive`);
    }
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height * 3);
    for (let i = 0; i < width * height; i++) {
      this.data.set(background, i * 3);
    }
  }

  set(x: number, y: number, color: Rgb): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) {
      return; // clip silently; callers draw against layout math
    }
    this.data.set(color, (y * this.width + x) * 3);
  }

  get(x: number, y: number): Rgb {
    const i = (y * this.width + x) * 3;
    return [this.data[i], this.data[i + 1], this.data[i + 2]];
  }

  fillRect(x: number, y: number, w: number, h: number, color: Rgb): void {
    for (let dy = 0; dy < h; dy++) {
      for (let dx = 0; dx < w; dx++) {
        this.set(x + dx, y + dy, color);
      }
    }
  }

  /** Bresenham segment; dash pattern counts pixels along the walk. */
  line(x0: number, y0: number, x1: number, y1: number, color: Rgb, dash?: DashPattern): void {
    let x = Math.round(x0);
    let y = Math.round(y0);
    const ex = Math.round(x1);
    const ey = Math.round(y1);
    const dx = Math.abs(ex - x);
    const dy = -Math.abs(ey - y);
    const sx = x < ex ? 1 : -1;
    const sy = y < ey ? 1 : -1;
    let err = dx + dy;
    let step = 0;
    const period = dash ? dash.on + dash.off : 0;
    for (;;) {
      if (!dash || step % period < dash.on) {
        this.set(x, y, color);
      }
      if (x === ex && y === ey) {
        break;
      }
      step++;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  /** 5x7 bitmap text; (x, y) is the top-left corner. */
  text(x: number, y: number, s: string, color: Rgb, scale = 1): void {
    let cx = x;
    for (const ch of s) {
      const cols = glyph(ch);
      for (let cix = 0; cix < GLYPH_WIDTH; cix++) {
        for (let row = 0; row < GLYPH_HEIGHT; row++) {
          if (cols[cix] & (1 << row)) {
            this.fillRect(cx + cix * scale, y + row * scale, scale, scale, color);
          }
        }
      }
      cx += (GLYPH_WIDTH + 1) * scale;
    }
  }
}

export function textWidth(s: string, scale = 1): number {
  return s.length * (GLYPH_WIDTH + 1) * scale - scale;
}

export const TEXT_HEIGHT = GLYPH_HEIGHT;
