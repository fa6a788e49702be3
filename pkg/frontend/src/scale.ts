/** Affine map from a data domain onto pixel coordinates. */
export function linearScale(
  domain: [number, number],
  range: [number, number],
): (x: number) => number {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (x: number) => r0 + ((x - d0) / span) * (r1 - r0);
}

/** [min, max] of finite values; [0, 1] when nothing is finite. */
export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 1];
  return [lo, hi];
}

/** Widen an extent by a fractional margin on both sides. */
export function padded(e: [number, number], frac = 0.05): [number, number] {
  const span = e[1] - e[0] || 1;
  return [e[0] - frac * span, e[1] + frac * span];
}

/**
 * Round tick positions covering [lo, hi], at most n of them.
 *
 * Steps are 1-2-5 times a power of ten, so labels stay short.
 */
export function ticks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / Math.max(1, n);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    step = m * mag;
    if (step >= rawStep) break;
  }
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-9 * step; v += step) {
    // snap away float dust so tick labels come out clean
    out.push(Math.abs(v) < 1e-12 * step ? 0 : Number(v.toPrecision(12)));
  }
  return out;
}

/** Short label for a tick value. */
export function formatTick(x: number): string {
  if (x === 0) return "0";
  const ax = Math.abs(x);
  if (ax >= 1e4 || ax < 1e-3) return x.toExponential(0).replace("e+", "e");
  return String(Number(x.toPrecision(6)));
}
