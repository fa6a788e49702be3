import path from "node:path";

import { render, FigureKind, FIGURE_KINDS } from "./render.js";
import { makeAll } from "./make_all.js";

export interface CliOptions {
  runDir: string;
  out?: string;
  format: "vector" | "raster";
  trace?: string;
  kinds?: FigureKind[];
}

/**
 * Shared flag parsing for the figure scripts.
 *
 *   <run-dir> [--out PATH] [--format vector|raster] [--trace NAME] [--kind K]...
 */
export function parseArgs(argv: string[], usage: string): CliOptions {
  let runDir: string | undefined;
  let out: string | undefined;
  let format: "vector" | "raster" = "vector";
  let trace: string | undefined;
  const kinds: FigureKind[] = [];

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = (): string => {
      if (i + 1 >= argv.length) throw new Error(`${arg} needs a value\n${usage}`);
      return argv[++i];
    };
    if (arg === "--out") out = next();
    else if (arg === "--trace") trace = next();
    else if (arg === "--format") {
      const v = next();
      if (v !== "vector" && v !== "raster") {
        throw new Error(`--format must be vector or raster, got '${v}'`);
      }
      format = v;
    } else if (arg === "--kind") {
      const v = next() as FigureKind;
      if (!FIGURE_KINDS.includes(v)) {
        throw new Error(`--kind must be one of ${FIGURE_KINDS.join(", ")}, got '${v}'`);
      }
      kinds.push(v);
    } else if (arg === "--help" || arg === "-h") {
      console.log(usage);
      process.exit(0);
    } else if (arg.startsWith("-")) {
      throw new Error(`unknown flag ${arg}\n${usage}`);
    } else if (runDir === undefined) {
      runDir = arg;
    } else {
      throw new Error(`unexpected argument ${arg}\n${usage}`);
    }
  }
  if (runDir === undefined) throw new Error(`missing run directory\n${usage}`);
  return { runDir, out, format, trace, kinds: kinds.length > 0 ? kinds : undefined };
}

/** Entry point for the one-kind scripts. */
export async function figureMain(kind: FigureKind, argv: string[]): Promise<void> {
  const usage = `usage: ${kind}.js <run-dir> [--out PATH] [--format vector|raster] [--trace NAME]`;
  const opts = parseArgs(argv, usage);
  const suffix = opts.format === "vector" ? ".svg" : ".png";
  const stem = opts.trace === undefined ? kind : `${kind}_${opts.trace}`;
  const outPath = opts.out ?? path.join(opts.runDir, "figures", `${stem}${suffix}`);
  const written = await render({
    kind,
    runDir: opts.runDir,
    outPath,
    format: opts.format,
    trace: opts.trace,
  });
  console.log(written);
}

/** Entry point for the make-all driver. */
export async function makeAllMain(argv: string[]): Promise<void> {
  const usage =
    "usage: make_all.js <run-dir> [--out DIR] [--format vector|raster] [--kind K]...";
  const opts = parseArgs(argv, usage);
  const written = await makeAll(opts.runDir, {
    out: opts.out,
    format: opts.format,
    kinds: opts.kinds,
  });
  for (const p of written) console.log(p);
}

export function reportFailure(err: unknown): never {
  console.error((err as Error).message);
  process.exit(1);
}
