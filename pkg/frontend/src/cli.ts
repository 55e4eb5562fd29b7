#!/usr/bin/env node
/**
 * Render experiment artifacts to PNG.
 *
 *   plot heatmap    --in summary.json --out fig.png
 *   plot timeseries --in rep*.csv --perturb-every 100000 --out fig.png
 *   plot bars       --in a/summary.json b/summary.json --out fig.png
 *
 * Exit codes: 0 drawn, 1 bad usage or bad input files, 2 unexpected failure.
 */

import { writeFileSync } from "node:fs";
import process from "node:process";
import yargs from "yargs";
import type { Argv } from "yargs";
import { hideBin } from "yargs/helpers";
import { renderBars } from "./bars.js";
import { PlotError } from "./chart.js";
import { CsvFormatError, readPopulationCsv } from "./csv.js";
import { renderHeatmap } from "./heatmap.js";
import { encodePng } from "./png.js";
import type { Raster } from "./raster.js";
import { ArtifactError, readPerturbEvery, readSummary } from "./summary.js";
import { renderTimeseries } from "./timeseries.js";

interface IoArgs {
  in: string[];
  out: string;
}

interface TimeseriesArgs extends IoArgs {
  label?: string;
  "perturb-every"?: number;
  manifest?: string;
}

interface BarsArgs extends IoArgs {
  label?: string;
}

function save(out: string, raster: Raster): void {
  writeFileSync(out, encodePng(raster.width, raster.height, raster.data));
  process.stderr.write(`wrote ${out} (${raster.width}x${raster.height})\n`);
}

function run(draw: () => Raster, out: string): void {
  try {
    save(out, draw());
  } catch (err) {
    if (err instanceof PlotError || err instanceof CsvFormatError || err instanceof ArtifactError) {
      process.stderr.write(`error: ${err.message}\n`);
      process.exit(1);
    }
    process.stderr.write(`unexpected failure: ${err instanceof Error ? err.message : err}\n`);
    process.exit(2);
  }
}

function io(y: Argv): Argv {
  return y
    .option("in", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "input artifact file(s)",
    })
    .option("out", { type: "string", demandOption: true, describe: "output PNG path" });
}

yargs(hideBin(process.argv))
  .scriptName("plot")
  .command(
    "heatmap",
    "outcome-rate heatmap from one threshold summary.json",
    (y) => io(y),
    (argv) => {
      const args = argv as unknown as IoArgs;
      if (args.in.length !== 1) {
        process.stderr.write("error: heatmap takes exactly one summary.json\n");
        process.exit(1);
      }
      run(() => renderHeatmap(readSummary(args.in[0])).raster, args.out);
    },
  )
  .command(
    "timeseries",
    "population fraction per collision from replicate CSVs",
    (y) =>
      io(y)
        .option("label", { type: "string", describe: "motif to plot (default: first column)" })
        .option("perturb-every", {
          type: "number",
          describe: "collisions between perturbations, for the dashed markers",
        })
        .option("manifest", {
          type: "string",
          describe: "manifest.json to read the perturbation interval from",
        }),
    (argv) => {
      const args = argv as unknown as TimeseriesArgs;
      run(() => {
        const perturbEvery =
          args["perturb-every"] ?? (args.manifest ? readPerturbEvery(args.manifest) : undefined);
        const inputs = args.in.map((path) => ({ name: path, data: readPopulationCsv(path) }));
        return renderTimeseries(inputs, { label: args.label, perturbEvery }).raster;
      }, args.out);
    },
  )
  .command(
    "bars",
    "time-averaged populations on a log axis, one panel per summary.json",
    (y) => io(y).option("label", { type: "string", describe: "motif to chart" }),
    (argv) => {
      const args = argv as unknown as BarsArgs;
      run(() => renderBars(args.in.map(readSummary), { label: args.label }).raster, args.out);
    },
  )
  .demandCommand(1, "pick a chart type: heatmap, timeseries or bars")
  .strict()
  .fail((msg, err) => {
    process.stderr.write(`error: ${msg ?? err?.message}\n`);
    process.exit(1);
  })
  .parseSync();
