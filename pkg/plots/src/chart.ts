/**
 * Line/error-bar chart drawing on the software canvas.
 *
 * One fixed style table: white background, gray grid, black frame, the
 * shared palette for series.  All geometry is derived from the data and
 * the canvas size only, so a chart renders identically every time.
 */

import { BLACK, Canvas, Color, GRAY, PALETTE, textWidth } from "./raster";

export interface Series {
  label: string;
  xs: number[];
  ys: number[];
  /** Half-length of vertical error bars, per point (optional). */
  yerr?: number[];
  markers?: boolean;
}

export interface AxesOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  x0?: number;
  y0?: number;
  x1?: number;
  y1?: number;
}

const MARGIN = { left: 64, right: 16, top: 26, bottom: 46 } as const;

/** Variant of the classic nice-ticks rule: 4..8 round steps covering the range. */
export function niceTicks(lo: number, hi: number, target = 5): number[] {
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) return [];
  if (lo === hi) {
    hi = lo + 1;
    lo -= 1;
  }
  const span = hi - lo;
  const rawStep = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const mult of [1, 2, 2.5, 5, 10]) {
    if (mag * mult >= rawStep) {
      step = mag * mult;
      break;
    }
  }
  const ticks: number[] = [];
  const first = Math.ceil(lo / step) * step;
  for (let v = first; v <= hi + 1e-9 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 10000 || a < 0.01) return v.toExponential(0).replace("e+", "E").replace("e", "E");
  const s = a >= 100 ? v.toFixed(0) : a >= 1 ? String(Math.round(v * 100) / 100) : String(Math.round(v * 1000) / 1000);
  return s;
}

export class LineChart {
  readonly canvas: Canvas;
  private readonly series: Series[] = [];
  private opts: AxesOptions;

  constructor(width: number, height: number, opts: AxesOptions) {
    this.canvas = new Canvas(width, height);
    this.opts = opts;
  }

  add(series: Series): void {
    this.series.push(series);
  }

  private extent(): { x0: number; x1: number; y0: number; y1: number } {
    let x0 = Infinity;
    let x1 = -Infinity;
    let y0 = Infinity;
    let y1 = -Infinity;
    for (const s of this.series) {
      for (let i = 0; i < s.xs.length; i++) {
        const x = s.xs[i];
        const ylo = s.ys[i] - (s.yerr ? s.yerr[i] : 0);
        const yhi = s.ys[i] + (s.yerr ? s.yerr[i] : 0);
        if (Number.isFinite(x)) {
          x0 = Math.min(x0, x);
          x1 = Math.max(x1, x);
        }
        if (Number.isFinite(ylo)) y0 = Math.min(y0, ylo);
        if (Number.isFinite(yhi)) y1 = Math.max(y1, yhi);
      }
    }
    if (!Number.isFinite(x0)) (x0 = 0), (x1 = 1);
    if (!Number.isFinite(y0)) (y0 = 0), (y1 = 1);
    const padY = (y1 - y0 || 1) * 0.06;
    return {
      x0: this.opts.x0 ?? x0,
      x1: this.opts.x1 ?? x1,
      y0: this.opts.y0 ?? y0 - padY,
      y1: this.opts.y1 ?? y1 + padY,
    };
  }

  render(): Canvas {
    const c = this.canvas;
    const { x0, x1, y0, y1 } = this.extent();
    const plotW = c.width - MARGIN.left - MARGIN.right;
    const plotH = c.height - MARGIN.top - MARGIN.bottom;
    const px = (x: number) => MARGIN.left + ((x - x0) / (x1 - x0 || 1)) * plotW;
    const py = (y: number) => MARGIN.top + (1 - (y - y0) / (y1 - y0 || 1)) * plotH;

    // grid and ticks
    for (const t of niceTicks(x0, x1)) {
      const x = px(t);
      c.drawLine(x, MARGIN.top, x, MARGIN.top + plotH, GRAY);
      const label = formatTick(t);
      c.drawText(label, x - textWidth(label) / 2, MARGIN.top + plotH + 6, BLACK);
    }
    for (const t of niceTicks(y0, y1)) {
      const y = py(t);
      c.drawLine(MARGIN.left, y, MARGIN.left + plotW, y, GRAY);
      const label = formatTick(t);
      c.drawText(label, MARGIN.left - textWidth(label) - 6, y - 3, BLACK);
    }

    // frame
    c.drawLine(MARGIN.left, MARGIN.top, MARGIN.left, MARGIN.top + plotH, BLACK);
    c.drawLine(MARGIN.left, MARGIN.top + plotH, MARGIN.left + plotW, MARGIN.top + plotH, BLACK);

    // series
    this.series.forEach((s, idx) => {
      const color = PALETTE[idx % PALETTE.length];
      let prev: [number, number] | null = null;
      for (let i = 0; i < s.xs.length; i++) {
        const x = s.xs[i];
        const y = s.ys[i];
        if (!Number.isFinite(x) || !Number.isFinite(y)) {
          prev = null;
          continue;
        }
        const X = px(x);
        const Y = py(y);
        if (prev) c.drawLine(prev[0], prev[1], X, Y, color, 2);
        prev = [X, Y];
        if (s.markers) c.drawMarker(X, Y, color, 5);
        if (s.yerr && Number.isFinite(s.yerr[i]) && s.yerr[i] > 0) {
          const lo = py(y - s.yerr[i]);
          const hi = py(y + s.yerr[i]);
          c.drawLine(X, lo, X, hi, color, 1);
          c.drawLine(X - 3, lo, X + 3, lo, color, 1);
          c.drawLine(X - 3, hi, X + 3, hi, color, 1);
        }
      }
    });

    // labels and title
    c.drawText(this.opts.title,
      MARGIN.left + (plotW - textWidth(this.opts.title)) / 2, 8, BLACK);
    c.drawText(this.opts.xLabel,
      MARGIN.left + (plotW - textWidth(this.opts.xLabel)) / 2,
      c.height - 14, BLACK);
    c.drawTextVertical(this.opts.yLabel, 8,
      MARGIN.top + (plotH + textWidth(this.opts.yLabel)) / 2, BLACK);

    // legend, top-right inside the frame
    const entries = this.series.map((s) => s.label);
    const widest = Math.max(...entries.map(textWidth), 0);
    const lx = MARGIN.left + plotW - widest - 28;
    let ly = MARGIN.top + 6;
    this.series.forEach((s, idx) => {
      const color = PALETTE[idx % PALETTE.length];
      c.drawLine(lx, ly + 3, lx + 14, ly + 3, color, 2);
      c.drawText(s.label, lx + 20, ly, BLACK);
      ly += 12;
    });
    return c;
  }
}
