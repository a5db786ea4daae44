/**
 * Minimal software canvas: RGBA pixel buffer with lines, rectangles,
 * markers, and bitmap text.  Everything is integer pixel work; there is
 * no anti-aliasing, which keeps renders bit-reproducible.
 */

import { GLYPH_HEIGHT, GLYPH_WIDTH, glyphFor, textWidth } from "./font";

export type Color = readonly [number, number, number, number];

export const WHITE: Color = [255, 255, 255, 255];
export const BLACK: Color = [0, 0, 0, 255];
export const GRAY: Color = [200, 200, 200, 255];

/** Fixed series palette (matplotlib-like ordering). */
export const PALETTE: Color[] = [
  [31, 119, 180, 255],
  [255, 127, 14, 255],
  [44, 160, 44, 255],
  [214, 39, 40, 255],
  [148, 103, 189, 255],
  [140, 86, 75, 255],
  [227, 119, 194, 255],
  [127, 127, 127, 255],
];

export class Canvas {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8ClampedArray;

  constructor(width: number, height: number, background: Color = WHITE) {
    this.width = width;
    this.height = height;
    this.data = new Uint8ClampedArray(width * height * 4);
    this.fillRect(0, 0, width, height, background);
  }

  setPixel(x: number, y: number, color: Color): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 4;
    this.data[i] = color[0];
    this.data[i + 1] = color[1];
    this.data[i + 2] = color[2];
    this.data[i + 3] = color[3];
  }

  fillRect(x: number, y: number, w: number, h: number, color: Color): void {
    const x0 = Math.max(0, Math.round(x));
    const y0 = Math.max(0, Math.round(y));
    const x1 = Math.min(this.width, Math.round(x + w));
    const y1 = Math.min(this.height, Math.round(y + h));
    for (let yy = y0; yy < y1; yy++) {
      for (let xx = x0; xx < x1; xx++) {
        const i = (yy * this.width + xx) * 4;
        this.data[i] = color[0];
        this.data[i + 1] = color[1];
        this.data[i + 2] = color[2];
        this.data[i + 3] = color[3];
      }
    }
  }

  /** Bresenham segment with optional square thickness. */
  drawLine(x0: number, y0: number, x1: number, y1: number, color: Color, thickness = 1): void {
    let ax = Math.round(x0);
    let ay = Math.round(y0);
    const bx = Math.round(x1);
    const by = Math.round(y1);
    const dx = Math.abs(bx - ax);
    const dy = -Math.abs(by - ay);
    const sx = ax < bx ? 1 : -1;
    const sy = ay < by ? 1 : -1;
    let err = dx + dy;
    const pad = Math.floor(thickness / 2);
    for (;;) {
      if (thickness <= 1) {
        this.setPixel(ax, ay, color);
      } else {
        this.fillRect(ax - pad, ay - pad, thickness, thickness, color);
      }
      if (ax === bx && ay === by) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        ax += sx;
      }
      if (e2 <= dx) {
        err += dx;
        ay += sy;
      }
    }
  }

  drawMarker(x: number, y: number, color: Color, size = 5): void {
    const half = Math.floor(size / 2);
    this.fillRect(Math.round(x) - half, Math.round(y) - half, size, size, color);
  }

  drawText(text: string, x: number, y: number, color: Color, scale = 1): void {
    let cx = Math.round(x);
    const cy = Math.round(y);
    for (const ch of text) {
      const rows = glyphFor(ch);
      for (let r = 0; r < GLYPH_HEIGHT; r++) {
        for (let c = 0; c < GLYPH_WIDTH; c++) {
          if ((rows[r] >> (GLYPH_WIDTH - 1 - c)) & 1) {
            if (scale === 1) {
              this.setPixel(cx + c, cy + r, color);
            } else {
              this.fillRect(cx + c * scale, cy + r * scale, scale, scale, color);
            }
          }
        }
      }
      cx += (GLYPH_WIDTH + 1) * scale;
    }
  }

  /** Text rotated 90 degrees counterclockwise (for y-axis labels). */
  drawTextVertical(text: string, x: number, y: number, color: Color): void {
    let cy = Math.round(y);
    const cx = Math.round(x);
    for (const ch of text) {
      const rows = glyphFor(ch);
      for (let r = 0; r < GLYPH_HEIGHT; r++) {
        for (let c = 0; c < GLYPH_WIDTH; c++) {
          if ((rows[r] >> (GLYPH_WIDTH - 1 - c)) & 1) {
            this.setPixel(cx + r, cy - c, color);
          }
        }
      }
      cy -= GLYPH_WIDTH + 1;
    }
  }
}

export { textWidth };
