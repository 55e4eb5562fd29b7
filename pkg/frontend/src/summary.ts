/**
 * Typed loaders for the experiment artifacts consumed by the plots:
 * summary.json (per-cell statistics) and manifest.json (we only need
 * the perturbation interval from the embedded config).
 */

import { readFileSync } from "node:fs";
import { z } from "zod";

const coordsSchema = z.record(z.union([z.string(), z.number()]));

const cellBase = z.object({
  cell_id: z.string(),
  coords: coordsSchema.default({}),
  replicates_ok: z.number().int().nonnegative(),
  replicates_failed: z.number().int().nonnegative(),
});

const thresholdCell = cellBase.extend({
  label: z.string(),
  threshold: z.number(),
  over_threshold: z.number().int().nonnegative(),
  over_threshold_rate: z.number().nullable(),
});

const timeAverageCell = cellBase.extend({
  time_averages: z.record(z.number().nullable()),
});

const summarySchema = z.discriminatedUnion("summary_kind", [
  z.object({
    summary_kind: z.enum(["threshold", "peak_threshold"]),
    preset: z.string(),
    config_hash: z.string(),
    cells: z.array(thresholdCell).min(1),
  }),
  z.object({
    summary_kind: z.literal("time_average"),
    preset: z.string(),
    config_hash: z.string(),
    cells: z.array(timeAverageCell).min(1),
  }),
]);

export type Summary = z.infer<typeof summarySchema>;
export type ThresholdSummary = Extract<Summary, { summary_kind: "threshold" | "peak_threshold" }>;
export type TimeAverageSummary = Extract<Summary, { summary_kind: "time_average" }>;
export type ThresholdCell = z.infer<typeof thresholdCell>;

const manifestSchema = z.object({
  config: z.object({ perturb_every: z.number().int().positive() }).passthrough(),
}).passthrough();

export class ArtifactError extends Error {}

function loadJson(path: string): unknown {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new ArtifactError(`${path}: ${(err as Error).message}`);
  }
  try {
    return JSON.parse(text);
  } catch {
    throw new ArtifactError(`${path}: not valid JSON`);
  }
}

export function readSummary(path: string): Summary {
  const result = summarySchema.safeParse(loadJson(path));
  if (!result.success) {
    throw new ArtifactError(`${path}: ${result.error.issues[0].message}`);
  }
  return result.data;
}

/** Pull the perturbation interval out of a manifest.json. */
export function readPerturbEvery(path: string): number {
  const result = manifestSchema.safeParse(loadJson(path));
  if (!result.success) {
    throw new ArtifactError(`${path}: ${result.error.issues[0].message}`);
  }
  return result.data.config.perturb_every;
}
