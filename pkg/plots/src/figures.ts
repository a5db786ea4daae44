/**
 * Figure catalogue: which CSV feeds each panel and how to draw it.
 *
 * Every figure reads one harness CSV, groups rows into series by a key
 * column, and renders a 640x480 panel.  Missing input files are reported
 * together, by name, before anything is drawn.
 */

import { existsSync, mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { LineChart, Series } from "./chart";
import { Table, distinct, readCsv, requireColumns } from "./csv";
import { encodePng } from "./png";
import { Canvas } from "./raster";

const WIDTH = 640;
const HEIGHT = 480;

const ITER_COLUMNS = ["iter", "cost", "eta", "srer_db", "consistency", "algo", "m_over_n", "snr_db"];

interface FigureDef {
  name: string;
  input: string;
  columns: string[];
  draw: (table: Table) => Canvas;
}

function num(v: number | string): number {
  return typeof v === "number" ? v : Number(v);
}

function seriesBy(
  table: Table,
  key: "algo" | "m_over_n" | "snr_db",
  yColumn: string,
  labelOf: (v: number | string) => string,
  transform: (y: number) => number = (y) => y,
): Series[] {
  return distinct(table, key).map((value) => {
    const rows = table.rows.filter((r) => Object.is(r[key], value));
    rows.sort((a, b) => num(a.iter) - num(b.iter));
    return {
      label: labelOf(value),
      xs: rows.map((r) => num(r.iter)),
      ys: rows.map((r) => transform(num(r[yColumn]))),
    };
  });
}

function iterationPanel(
  table: Table,
  key: "algo" | "m_over_n" | "snr_db",
  yColumn: string,
  title: string,
  yLabel: string,
  labelOf: (v: number | string) => string,
  transform?: (y: number) => number,
): Canvas {
  const chart = new LineChart(WIDTH, HEIGHT, { title, xLabel: "iteration", yLabel });
  for (const s of seriesBy(table, key, yColumn, labelOf, transform)) chart.add(s);
  return chart.render();
}

const log10Safe = (y: number) => (y > 0 ? Math.log10(y) : NaN);
const mnLabel = (v: number | string) => `m/n = ${v}`;
const snrLabel = (v: number | string) => `${v} dB input SNR`;
const algoLabel = (v: number | string) => String(v);

export const FIGURES: FigureDef[] = [
  {
    name: "noiseless-srer",
    input: "noiseless_sweep.csv",
    columns: ITER_COLUMNS,
    draw: (t) => iterationPanel(t, "m_over_n", "srer_db",
      "noise-free reconstruction", "SRER (dB)", mnLabel),
  },
  {
    name: "noiseless-consistency",
    input: "noiseless_sweep.csv",
    columns: ITER_COLUMNS,
    draw: (t) => iterationPanel(t, "m_over_n", "consistency",
      "noise-free reconstruction", "consistency", mnLabel),
  },
  {
    name: "baseline-srer",
    input: "baseline_compare.csv",
    columns: ITER_COLUMNS,
    draw: (t) => iterationPanel(t, "algo", "srer_db",
      "solver comparison, m/n = 20", "SRER (dB)", algoLabel),
  },
  {
    name: "baseline-consistency",
    input: "baseline_compare.csv",
    columns: ITER_COLUMNS,
    draw: (t) => iterationPanel(t, "algo", "consistency",
      "solver comparison, m/n = 20", "consistency", algoLabel),
  },
  {
    name: "fourier-srer",
    input: "fourier.csv",
    columns: ITER_COLUMNS,
    draw: (t) => iterationPanel(t, "algo", "srer_db",
      "masked-dft sensing, m/n = 20", "SRER (dB)", algoLabel),
  },
  {
    name: "fourier-plain-dft-srer",
    input: "fourier_plain_dft.csv",
    columns: ITER_COLUMNS,
    draw: (t) => iterationPanel(t, "algo", "srer_db",
      "plain oversampled dft: recovery failure", "SRER (dB)", algoLabel),
  },
  {
    name: "noisy-srer",
    input: "noisy_sweep.csv",
    columns: ITER_COLUMNS,
    draw: (t) => iterationPanel(t, "snr_db", "srer_db",
      "noisy encoding, m/n = 20", "SRER (dB)", snrLabel),
  },
  {
    name: "noisy-consistency",
    input: "noisy_sweep.csv",
    columns: ITER_COLUMNS,
    draw: (t) => iterationPanel(t, "snr_db", "consistency",
      "noisy encoding, m/n = 20", "consistency", snrLabel),
  },
  {
    name: "apgd-vs-pgd-cost",
    input: "apgd_vs_pgd.csv",
    columns: ITER_COLUMNS,
    draw: (t) => iterationPanel(t, "algo", "cost",
      "momentum effect", "log10 cost", algoLabel, log10Safe),
  },
  {
    name: "apgd-vs-pgd-srer",
    input: "apgd_vs_pgd.csv",
    columns: ITER_COLUMNS,
    draw: (t) => iterationPanel(t, "algo", "srer_db",
      "momentum effect", "SRER (dB)", algoLabel),
  },
  {
    name: "srer-vs-crb",
    input: "crb_compare.csv",
    columns: ["snr_db", "crb_srer_db", "bpr_srer_mean_db", "bpr_srer_std_db"],
    draw: (t) => {
      const rows = [...t.rows].sort((a, b) => num(a.snr_db) - num(b.snr_db));
      const xs = rows.map((r) => num(r.snr_db));
      const chart = new LineChart(WIDTH, HEIGHT, {
        title: "mean srer vs estimation bound",
        xLabel: "input SNR (dB)",
        yLabel: "SRER (dB)",
      });
      chart.add({
        label: "estimation bound",
        xs,
        ys: rows.map((r) => num(r.crb_srer_db)),
        markers: true,
      });
      chart.add({
        label: "solver mean +- std",
        xs,
        ys: rows.map((r) => num(r.bpr_srer_mean_db)),
        yerr: rows.map((r) => num(r.bpr_srer_std_db)),
        markers: true,
      });
      return chart.render();
    },
  },
  {
    name: "image-quality",
    input: "image_quality.csv",
    columns: ["m_over_n", "psnr_db", "ssim"],
    draw: (t) => {
      const rows = [...t.rows].sort((a, b) => num(a.m_over_n) - num(b.m_over_n));
      const xs = rows.map((r) => num(r.m_over_n));
      const chart = new LineChart(WIDTH, HEIGHT, {
        title: "image reconstruction quality",
        xLabel: "oversampling m/n",
        yLabel: "PSNR (dB) / SSIM x 40",
      });
      chart.add({
        label: "PSNR (dB)",
        xs,
        ys: rows.map((r) => num(r.psnr_db)),
        markers: true,
      });
      chart.add({
        label: "SSIM x 40",
        xs,
        ys: rows.map((r) => 40 * num(r.ssim)),
        markers: true,
      });
      return chart.render();
    },
  },
];

export function figureNames(): string[] {
  return FIGURES.map((f) => f.name);
}

/**
 * Render the selected figures (all by default) from csvDir into outDir.
 * Returns the written file paths.  Never mutates the inputs.
 */
export function renderFigures(csvDir: string, outDir: string, only?: string): string[] {
  let defs = FIGURES;
  if (only !== undefined) {
    defs = FIGURES.filter((f) => f.name === only);
    if (defs.length === 0) {
      throw new Error(`unknown figure "${only}"; available: ${figureNames().join(", ")}`);
    }
  }
  const missing = [...new Set(defs.map((f) => f.input))]
    .filter((name) => !existsSync(join(csvDir, name)));
  if (missing.length > 0) {
    throw new Error(`missing input CSV file(s) in ${csvDir}: ${missing.join(", ")}`);
  }
  mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  for (const def of defs) {
    const path = join(csvDir, def.input);
    const table = readCsv(path);
    requireColumns(table, path, def.columns);
    const canvas = def.draw(table);
    const out = join(outDir, `${def.name}.png`);
    writeFileSync(out, encodePng(canvas.width, canvas.height, canvas.data));
    written.push(out);
  }
  return written;
}
