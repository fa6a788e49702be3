import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { RunDir } from "../src/rundir.js";

const SAMPLE = fileURLToPath(new URL("../sample-run", import.meta.url));

describe("RunDir.open", () => {
  it("loads the manifest of the shipped sample", () => {
    const run = RunDir.open(SAMPLE);
    expect(run.manifest.schema).toBe("spinbath-run/1");
    expect(run.family()).toBe("D");
    expect(run.traceNames().length).toBeGreaterThan(0);
  });

  it("rejects a directory without a manifest", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "empty-run-"));
    expect(() => RunDir.open(dir)).toThrow(/missing input/);
  });

  it("rejects a manifest with a foreign schema", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "bad-run-"));
    fs.writeFileSync(path.join(dir, "manifest.json"), JSON.stringify({ schema: "other/9" }));
    expect(() => RunDir.open(dir)).toThrow(/expected schema 'spinbath-run\/1'/);
  });
});

describe("traces", () => {
  const run = RunDir.open(SAMPLE);

  it("parses every listed trace with aligned columns", () => {
    for (const name of run.traceNames()) {
      const trace = run.trace(name);
      expect(trace.t.length).toBeGreaterThan(1);
      for (const col of [trace.aX, trace.aY, trace.aZ, trace.norm, trace.sO, trace.m]) {
        expect(col).toHaveLength(trace.t.length);
      }
    }
  });

  it("keeps the squared norm near one along every trajectory", () => {
    for (const name of run.traceNames()) {
      for (const n of run.trace(name).norm) {
        expect(Math.abs(n - 1)).toBeLessThan(1e-6);
      }
    }
  });

  it("names unknown traces in the error", () => {
    expect(() => run.trace("nope")).toThrow(/no trace 'nope'/);
  });
});

describe("tables", () => {
  const run = RunDir.open(SAMPLE);

  it("types the asymptote rows (pilot seeds, sweep phis)", () => {
    const rows = run.asymptotes();
    const pilots = rows.filter((r) => r.kind === "pilot");
    const sweeps = rows.filter((r) => r.kind === "sweep");
    expect(pilots.length).toBeGreaterThan(0);
    expect(sweeps.length).toBeGreaterThan(0);
    for (const p of pilots) {
      expect(p.seed).not.toBeNull();
      expect(p.phi).toBeNull();
    }
    for (const s of sweeps) {
      expect(s.phi).not.toBeNull();
      expect(Math.abs(s.aZInf)).toBeLessThanOrEqual(1 + 1e-12);
    }
    const phis = sweeps.map((s) => s.phi as number);
    expect(Math.min(...phis)).toBeCloseTo(0, 12);
    expect(Math.max(...phis)).toBeCloseTo(Math.PI / 2, 12);
  });

  it("reads contiguous histogram bins with nonnegative counts", () => {
    const bins = run.histogram();
    expect(bins).not.toBeNull();
    for (let i = 1; i < bins!.length; i++) {
      expect(bins![i].binLo).toBeCloseTo(bins![i - 1].binHi, 12);
    }
    for (const b of bins!) expect(b.count).toBeGreaterThanOrEqual(0);
  });

  it("reads one ensemble row per mode per sampled run", () => {
    const points = run.ensemble();
    expect(points).not.toBeNull();
    const byRun = new Map<number, number>();
    for (const p of points!) byRun.set(p.runIndex, (byRun.get(p.runIndex) ?? 0) + 1);
    const counts = [...byRun.values()];
    for (const c of counts) expect(c).toBe(counts[0]);
  });

  it("reads the modulation grid in increasing time order", () => {
    const rows = run.modulation();
    expect(rows).not.toBeNull();
    for (let i = 1; i < rows!.length; i++) {
      expect(rows![i].t).toBeGreaterThan(rows![i - 1].t);
    }
    expect(rows![0].t).toBe(0);
  });
});
