import fs from "node:fs";
import path from "node:path";

import { RunDir } from "./rundir.js";
import { renderBloch } from "./figures/bloch.js";
import { renderScatter } from "./figures/scatter.js";
import { renderHistogram } from "./figures/histogram.js";
import { renderEntropy } from "./figures/entropy.js";
import { renderModulation } from "./figures/modulation.js";
import { renderSweep } from "./figures/sweep.js";

export const FIGURE_KINDS = [
  "bloch",
  "scatter",
  "histogram",
  "entropy",
  "modulation",
  "sweep",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureRequest {
  kind: FigureKind;
  runDir: string;
  outPath: string;
  format: "vector" | "raster";
  /** Trace name for the per-trajectory kinds (bloch, entropy); defaults to the first. */
  trace?: string;
}

/** Build the SVG text for one figure kind without touching the filesystem. */
export function figureSvg(run: RunDir, kind: FigureKind, trace?: string): string {
  switch (kind) {
    case "bloch":
      return renderBloch(run, trace);
    case "scatter":
      return renderScatter(run);
    case "histogram":
      return renderHistogram(run);
    case "entropy":
      return renderEntropy(run, trace);
    case "modulation":
      return renderModulation(run);
    case "sweep":
      return renderSweep(run);
  }
}

/** Kinds whose inputs this run directory actually provides. */
export function availableKinds(run: RunDir): FigureKind[] {
  const kinds: FigureKind[] = ["bloch", "entropy"];
  if (run.ensemble() !== null) kinds.push("scatter");
  if (run.histogram() !== null) kinds.push("histogram");
  if (run.modulation() !== null) kinds.push("modulation");
  if (run.asymptotes().some((r) => r.kind === "sweep")) kinds.push("sweep");
  return FIGURE_KINDS.filter((k) => kinds.includes(k));
}

/**
 * Render one figure to disk; returns the written path.
 *
 * Vector output is the SVG itself; raster output rasterizes the same
 * SVG, so both formats show identical content.
 */
export async function render(request: FigureRequest): Promise<string> {
  const run = RunDir.open(request.runDir);
  const svg = figureSvg(run, request.kind, request.trace);
  fs.mkdirSync(path.dirname(path.resolve(request.outPath)), { recursive: true });
  if (request.format === "vector") {
    fs.writeFileSync(request.outPath, svg, "utf-8");
  } else {
    const { rasterize } = await import("./raster.js");
    fs.writeFileSync(request.outPath, rasterize(svg));
  }
  return request.outPath;
}
