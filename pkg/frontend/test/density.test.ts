import { describe, expect, it } from "vitest";

import {
  densityShape,
  truncatedMass,
  asymptoteDensity,
  densityCurve,
  DEFAULT_EPS,
} from "../src/density.js";

/**
 * Adaptive Simpson quadrature, written here as an independent check on
 * the substitution-based integrator in src/density.ts.
 */
function adaptiveSimpson(
  f: (x: number) => number,
  a: number,
  b: number,
  tol = 1e-10,
  depth = 40,
): number {
  const simpson = (lo: number, hi: number): number =>
    ((hi - lo) / 6) * (f(lo) + 4 * f((lo + hi) / 2) + f(hi));
  const recurse = (lo: number, hi: number, whole: number, eps: number, d: number): number => {
    const mid = (lo + hi) / 2;
    const left = simpson(lo, mid);
    const right = simpson(mid, hi);
    if (d <= 0 || Math.abs(left + right - whole) <= 15 * eps) {
      return left + right + (left + right - whole) / 15;
    }
    return recurse(lo, mid, left, eps / 2, d - 1) + recurse(mid, hi, right, eps / 2, d - 1);
  };
  return recurse(a, b, simpson(a, b), tol, depth);
}

describe("densityShape", () => {
  it("is sqrt(2) at the center and symmetric", () => {
    expect(densityShape(0)).toBeCloseTo(Math.SQRT2, 14);
    for (const x of [0.1, 0.45, 0.8, 0.99]) {
      expect(densityShape(x)).toBeCloseTo(densityShape(-x), 14);
    }
  });

  it("increases monotonically toward the endpoints", () => {
    let prev = densityShape(0);
    for (let x = 0.05; x < 1; x += 0.05) {
      const cur = densityShape(x);
      expect(cur).toBeGreaterThan(prev);
      prev = cur;
    }
  });
});

describe("normalization", () => {
  it.each([1e-2, 1e-3, 1e-4])("unit mass within 1e-6 on the eps=%s domain", (eps) => {
    const density = asymptoteDensity(eps);
    const mass = adaptiveSimpson(density, -1 + eps, 1 - eps, 1e-9);
    expect(Math.abs(mass - 1)).toBeLessThan(1e-6);
  });

  it("matches the independent quadrature for the raw mass", () => {
    const eps = DEFAULT_EPS;
    const direct = adaptiveSimpson(densityShape, -1 + eps, 1 - eps, 1e-10);
    expect(truncatedMass(eps)).toBeCloseTo(direct, 8);
  });

  it("grows as the truncation shrinks (integrable divergence)", () => {
    expect(truncatedMass(1e-4)).toBeGreaterThan(truncatedMass(1e-2));
    expect(truncatedMass(1e-6)).toBeLessThan(10);
  });

  it("is zero outside the truncated domain", () => {
    const density = asymptoteDensity(1e-3);
    expect(density(0.9995)).toBe(0);
    expect(density(-1)).toBe(0);
    expect(density(1 - 1e-3)).toBeGreaterThan(0);
  });
});

describe("densityCurve", () => {
  it("samples the full truncated domain symmetrically", () => {
    const { a, p } = densityCurve(1e-3, 101);
    expect(a).toHaveLength(101);
    expect(a[0]).toBeCloseTo(-(1 - 1e-3), 12);
    expect(a[100]).toBeCloseTo(1 - 1e-3, 12);
    expect(p[0]).toBeCloseTo(p[100], 10);
    expect(Math.min(...p)).toBeCloseTo(p[50], 12);
  });
});
