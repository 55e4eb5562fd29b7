/**
 * Reader for population time-series CSVs.
 *
 * Layout: a header row `collision,<label...>,soup_size`, then one row of
 * non-negative integers per measurement. Parsing never mutates the file
 * and the returned arrays are plain copies.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface PopulationSeries {
  /** Motif labels, in file order. */
  labels: string[];
  /** Collision count at each measurement. */
  collisions: number[];
  /** counts[label][i] is the motif count at collisions[i]. */
  counts: Map<string, number[]>;
  /** Soup size at each measurement. */
  soupSizes: number[];
}

export class CsvFormatError extends Error {}

function parseCell(raw: string, path: string, row: number): number {
  if (!/^\d+$/.test(raw)) {
    throw new CsvFormatError(`${path}: row ${row}: expected a non-negative integer, got ${JSON.stringify(raw)}`);
  }
  return Number(raw);
}

export function readPopulationCsv(path: string): PopulationSeries {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new CsvFormatError(`${path}: ${(err as Error).message}`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new CsvFormatError(`${path}: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  if (rows.length < 2) {
    throw new CsvFormatError(`${path}: need a header row and at least one data row`);
  }
  const header = rows[0];
  if (header.length < 3 || header[0] !== "collision" || header[header.length - 1] !== "soup_size") {
    throw new CsvFormatError(`${path}: header must be collision,<label...>,soup_size`);
  }
  const labels = header.slice(1, -1);
  if (new Set(labels).size !== labels.length) {
    throw new CsvFormatError(`${path}: duplicate motif labels in header`);
  }

  const collisions: number[] = [];
  const soupSizes: number[] = [];
  const counts = new Map<string, number[]>(labels.map((l) => [l, []]));
  for (let r = 1; r < rows.length; r++) {
    const row = rows[r];
    if (row.length !== header.length) {
      throw new CsvFormatError(`${path}: row ${r}: expected ${header.length} fields, got ${row.length}`);
    }
    collisions.push(parseCell(row[0], path, r));
    for (let c = 1; c < row.length - 1; c++) {
      counts.get(labels[c - 1])!.push(parseCell(row[c], path, r));
    }
    soupSizes.push(parseCell(row[row.length - 1], path, r));
  }
  return { labels, collisions, counts, soupSizes };
}
