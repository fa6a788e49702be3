import path from "node:path";

import { RunDir } from "./rundir.js";
import { render, availableKinds, FigureKind } from "./render.js";

export interface MakeAllOptions {
  out?: string;
  format?: "vector" | "raster";
  kinds?: FigureKind[];
}

function ext(format: "vector" | "raster"): string {
  return format === "vector" ? ".svg" : ".png";
}

/**
 * Render every figure the run directory supports; returns written paths.
 *
 * The per-trajectory kinds produce one file per trace; kinds whose
 * inputs the directory does not provide are skipped (an explicit
 * `kinds` list overrides that and errors on missing inputs instead).
 */
export async function makeAll(runDir: string, options: MakeAllOptions = {}): Promise<string[]> {
  const run = RunDir.open(runDir);
  const format = options.format ?? "vector";
  const out = options.out ?? path.join(runDir, "figures");
  const kinds = options.kinds ?? availableKinds(run);

  const written: string[] = [];
  for (const kind of kinds) {
    if (kind === "bloch" || kind === "entropy") {
      for (const name of run.traceNames()) {
        written.push(
          await render({
            kind,
            runDir,
            outPath: path.join(out, `${kind}_${name}${ext(format)}`),
            format,
            trace: name,
          }),
        );
      }
    } else {
      written.push(
        await render({ kind, runDir, outPath: path.join(out, `${kind}${ext(format)}`), format }),
      );
    }
  }
  return written;
}
