/**
 * Overlay density for asymptote histograms.
 *
 * The measured long-time polarization follows an incoherent-mixture fit
 * a(phi) = cos(2 phi) with uniformly distributed phi, which implies the
 * outcome density
 *
 *     p(a) ~ sqrt(1 + 1 / (1 - a^2)),   a in (-1, 1).
 *
 * The shape diverges at a = +-1 (integrably), so the curve is normalized
 * on the truncated domain [-1 + eps, 1 - eps].
 */

export const DEFAULT_EPS = 1e-3;

/** Unnormalized density shape; Infinity at the endpoints. */
export function densityShape(a: number): number {
  return Math.sqrt(1 + 1 / (1 - a * a));
}

/**
 * Mass of the unnormalized shape on [-1 + eps, 1 - eps].
 *
 * Substituting a = sin(theta) turns the integrand into the smooth
 * sqrt(1 + cos^2(theta)), so plain composite Simpson converges to
 * machine precision; no adaptive refinement is needed.
 */
export function truncatedMass(eps: number, intervals = 4096): number {
  if (!(eps > 0 && eps < 1)) throw new Error(`eps must be in (0, 1), got ${eps}`);
  const thetaMax = Math.asin(1 - eps);
  const f = (theta: number) => Math.sqrt(1 + Math.cos(theta) ** 2);
  const n = intervals % 2 === 0 ? intervals : intervals + 1;
  const h = (2 * thetaMax) / n;
  let acc = f(-thetaMax) + f(thetaMax);
  for (let i = 1; i < n; i++) {
    acc += (i % 2 === 1 ? 4 : 2) * f(-thetaMax + i * h);
  }
  return (acc * h) / 3;
}

/**
 * Normalized outcome density, zero outside the truncated domain.
 */
export function asymptoteDensity(eps = DEFAULT_EPS): (a: number) => number {
  const mass = truncatedMass(eps);
  const edge = 1 - eps;
  return (a: number) => (Math.abs(a) > edge ? 0 : densityShape(a) / mass);
}

/**
 * Sampled density curve for drawing, on an even grid over the domain.
 */
export function densityCurve(
  eps = DEFAULT_EPS,
  nPoints = 513,
): { a: number[]; p: number[] } {
  const density = asymptoteDensity(eps);
  const edge = 1 - eps;
  const a: number[] = [];
  const p: number[] = [];
  for (let i = 0; i < nPoints; i++) {
    // symmetric form lands exactly on +-edge, so the endpoints never
    // fall a rounding error outside the truncated domain
    const x = edge * ((2 * i) / (nPoints - 1) - 1);
    a.push(x);
    p.push(density(x));
  }
  return { a, p };
}
