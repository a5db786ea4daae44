import { describe, expect, it } from "vitest";

import { niceTicks } from "../src/chart";
import { BLACK, Canvas, WHITE } from "../src/raster";

function pixel(canvas: Canvas, x: number, y: number): number[] {
  const i = (y * canvas.width + x) * 4;
  return [...canvas.data.subarray(i, i + 4)];
}

describe("Canvas", () => {
  it("starts white", () => {
    const c = new Canvas(4, 4);
    expect(pixel(c, 0, 0)).toEqual([...WHITE]);
  });

  it("draws line endpoints", () => {
    const c = new Canvas(10, 10);
    c.drawLine(1, 1, 8, 6, BLACK);
    expect(pixel(c, 1, 1)).toEqual([...BLACK]);
    expect(pixel(c, 8, 6)).toEqual([...BLACK]);
  });

  it("clips out-of-range pixels silently", () => {
    const c = new Canvas(4, 4);
    c.setPixel(-1, 0, BLACK);
    c.setPixel(0, 99, BLACK);
    expect(pixel(c, 0, 0)).toEqual([...WHITE]);
  });

  it("renders text as ink", () => {
    const c = new Canvas(64, 12);
    c.drawText("SRER 25", 1, 2, BLACK);
    let dark = 0;
    for (let i = 0; i < c.data.length; i += 4) {
      if (c.data[i] === 0) dark += 1;
    }
    expect(dark).toBeGreaterThan(20);
  });
});

describe("niceTicks", () => {
  it("covers the range with round steps", () => {
    const ticks = niceTicks(0, 300);
    expect(ticks[0]).toBeGreaterThanOrEqual(0);
    expect(ticks[ticks.length - 1]).toBeLessThanOrEqual(300);
    expect(ticks.length).toBeGreaterThanOrEqual(3);
    const step = ticks[1] - ticks[0];
    for (let i = 2; i < ticks.length; i++) {
      expect(ticks[i] - ticks[i - 1]).toBeCloseTo(step, 9);
    }
  });

  it("handles degenerate ranges", () => {
    expect(niceTicks(5, 5).length).toBeGreaterThan(0);
    expect(niceTicks(NaN, 1)).toEqual([]);
  });
});
