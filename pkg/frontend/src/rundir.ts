import fs from "node:fs";
import path from "node:path";

import { readTable, column, numericColumn } from "./csv.js";

export const MANIFEST_SCHEMA = "spinbath-run/1";

/** One trajectory entry from the manifest's paths.traces list. */
export interface TraceEntry {
  name: string;
  kind: string;
  index: number;
  seed: number | null;
  trace: string;
  events: string;
  phi?: number;
  case?: string;
}

export interface Manifest {
  schema: string;
  spec: { family: string; label?: string | null; [key: string]: unknown };
  paths: {
    summary: string;
    asymptotes: string;
    traces: TraceEntry[];
    histogram?: string;
    ensemble?: string;
    modulation?: string;
    modulation_second?: string;
  };
  preset: string | null;
  [key: string]: unknown;
}

/** Sampled observables of one trajectory, columns of traces/<name>.csv. */
export interface BlochTrace {
  name: string;
  oracle: boolean;
  t: number[];
  aX: number[];
  aY: number[];
  aZ: number[];
  norm: number[];
  energy: number[];
  sLin: number[];
  sO: number[];
  m: number[];
}

export interface AsymptoteRow {
  index: number;
  kind: string;
  case: string;
  phi: number | null;
  seed: number | null;
  converged: boolean;
  aZInf: number;
  windowStd: number;
  aAbs2Inf: number;
  tLo: number;
  tHi: number;
}

export interface HistogramBin {
  binLo: number;
  binHi: number;
  count: number;
}

export interface EnsemblePoint {
  runIndex: number;
  kind: string;
  mode: number;
  omega: number;
  g: number;
  reGamma: number;
  imGamma: number;
}

export interface ModulationSample {
  t: number;
  fO: number;
  fOE: number;
}

function requireFile(p: string): string {
  if (!fs.existsSync(p)) throw new Error(`missing input: ${p}`);
  return p;
}

/**
 * Read-only view of one campaign's run directory.
 *
 * Resolves every file through the manifest's paths block, so renames in
 * the producing package surface as loud errors rather than stale reads.
 */
export class RunDir {
  readonly root: string;
  readonly manifest: Manifest;

  private constructor(root: string, manifest: Manifest) {
    this.root = root;
    this.manifest = manifest;
  }

  static open(dir: string): RunDir {
    const manifestPath = requireFile(path.join(dir, "manifest.json"));
    const manifest = JSON.parse(fs.readFileSync(manifestPath, "utf-8")) as Manifest;
    if (manifest.schema !== MANIFEST_SCHEMA) {
      throw new Error(
        `${manifestPath}: expected schema '${MANIFEST_SCHEMA}', got '${manifest.schema}'`,
      );
    }
    return new RunDir(dir, manifest);
  }

  /** Campaign family letter from the resolved spec. */
  family(): string {
    return this.manifest.spec.family;
  }

  resolve(rel: string): string {
    return path.join(this.root, rel);
  }

  traceEntries(): TraceEntry[] {
    return this.manifest.paths.traces;
  }

  traceNames(): string[] {
    return this.traceEntries().map((e) => e.name);
  }

  trace(name: string): BlochTrace {
    const entry = this.traceEntries().find((e) => e.name === name);
    if (entry === undefined) {
      throw new Error(`no trace '${name}' in ${this.root} (have: ${this.traceNames().join(", ")})`);
    }
    const table = readTable(requireFile(this.resolve(entry.trace)), "bloch-trace/1");
    return {
      name,
      oracle: table.flags["oracle"] === "true",
      t: numericColumn(table, "t"),
      aX: numericColumn(table, "a_x"),
      aY: numericColumn(table, "a_y"),
      aZ: numericColumn(table, "a_z"),
      norm: numericColumn(table, "norm"),
      energy: numericColumn(table, "energy"),
      sLin: numericColumn(table, "S_lin"),
      sO: numericColumn(table, "S_O"),
      m: numericColumn(table, "M"),
    };
  }

  asymptotes(): AsymptoteRow[] {
    const table = readTable(
      requireFile(this.resolve(this.manifest.paths.asymptotes)),
      "spinbath-asymptotes/1",
    );
    const kinds = column(table, "kind");
    const cases = column(table, "case");
    const converged = column(table, "converged");
    const index = numericColumn(table, "index");
    const phi = numericColumn(table, "phi");
    const seed = numericColumn(table, "seed");
    const aZInf = numericColumn(table, "a_z_inf");
    const windowStd = numericColumn(table, "window_std");
    const aAbs2Inf = numericColumn(table, "a_abs2_inf");
    const tLo = numericColumn(table, "t_lo");
    const tHi = numericColumn(table, "t_hi");
    return kinds.map((kind, i) => ({
      index: index[i],
      kind,
      case: cases[i],
      phi: Number.isNaN(phi[i]) ? null : phi[i],
      seed: Number.isNaN(seed[i]) ? null : seed[i],
      converged: converged[i] === "true",
      aZInf: aZInf[i],
      windowStd: windowStd[i],
      aAbs2Inf: aAbs2Inf[i],
      tLo: tLo[i],
      tHi: tHi[i],
    }));
  }

  histogram(): HistogramBin[] | null {
    const rel = this.manifest.paths.histogram;
    if (rel === undefined) return null;
    const table = readTable(requireFile(this.resolve(rel)), "spinbath-histogram/1");
    const lo = numericColumn(table, "bin_lo");
    const hi = numericColumn(table, "bin_hi");
    const count = numericColumn(table, "count");
    return lo.map((binLo, i) => ({ binLo, binHi: hi[i], count: count[i] }));
  }

  ensemble(): EnsemblePoint[] | null {
    const rel = this.manifest.paths.ensemble;
    if (rel === undefined) return null;
    const table = readTable(requireFile(this.resolve(rel)), "spinbath-ensemble/1");
    const runIndex = numericColumn(table, "run_index");
    const kind = column(table, "kind");
    const mode = numericColumn(table, "mode");
    const omega = numericColumn(table, "omega");
    const g = numericColumn(table, "g");
    const re = numericColumn(table, "re_gamma");
    const im = numericColumn(table, "im_gamma");
    return runIndex.map((r, i) => ({
      runIndex: r,
      kind: kind[i],
      mode: mode[i],
      omega: omega[i],
      g: g[i],
      reGamma: re[i],
      imGamma: im[i],
    }));
  }

  private modulationFrom(rel: string | undefined): ModulationSample[] | null {
    if (rel === undefined) return null;
    const table = readTable(requireFile(this.resolve(rel)), "spinbath-modulation/1");
    const t = numericColumn(table, "t");
    const fO = numericColumn(table, "f_O");
    const fOE = numericColumn(table, "f_OE");
    return t.map((ti, i) => ({ t: ti, fO: fO[i], fOE: fOE[i] }));
  }

  modulation(): ModulationSample[] | null {
    return this.modulationFrom(this.manifest.paths.modulation);
  }

  modulationSecond(): ModulationSample[] | null {
    return this.modulationFrom(this.manifest.paths.modulation_second);
  }
}
