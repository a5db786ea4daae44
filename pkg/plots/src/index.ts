#!/usr/bin/env node
/**
 * render --in <csv_dir> --out <out_dir> [--figure <name>]
 *
 * Reads the experiment harness's CSV files and writes one PNG per figure
 * panel.  Rendering is read-only over the CSVs and deterministic:
 * identical inputs produce byte-identical images.
 */

import { figureNames, renderFigures } from "./figures";

function usage(): never {
  console.error("usage: render --in <csv_dir> --out <out_dir> [--figure <name>]");
  console.error(`figures: ${figureNames().join(", ")}`);
  process.exit(2);
}

export function main(argv: string[]): number {
  let csvDir: string | undefined;
  let outDir: string | undefined;
  let figure: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case "--in":
        csvDir = argv[++i];
        break;
      case "--out":
        outDir = argv[++i];
        break;
      case "--figure":
        figure = argv[++i];
        break;
      case "--help":
      case "-h":
        usage();
        break;
      default:
        console.error(`unknown argument: ${argv[i]}`);
        usage();
    }
  }
  if (!csvDir || !outDir) usage();
  const written = renderFigures(csvDir, outDir, figure);
  for (const path of written) console.log(`wrote ${path}`);
  return 0;
}

if (require.main === module) {
  try {
    process.exit(main(process.argv.slice(2)));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    process.exit(1);
  }
}
