import { RunDir, HistogramBin } from "../rundir.js";
import { Frame, COLORS } from "../plot.js";
import { asymptoteDensity, densityCurve, DEFAULT_EPS } from "../density.js";
import { el, linePath, svgDocument } from "../svg.js";

/**
 * Density curve rescaled onto the count axis of a histogram.
 *
 * For uniform bins of width w and total count T the expected count at
 * outcome a is p(a) * T * w, which makes the curve directly comparable
 * to the bars.
 */
export function scaledOverlay(
  bins: HistogramBin[],
  eps = DEFAULT_EPS,
): { a: number[]; y: number[] } {
  const total = bins.reduce((acc, b) => acc + b.count, 0);
  const width = bins[0].binHi - bins[0].binLo;
  const { a, p } = densityCurve(eps);
  return { a, y: p.map((v) => v * total * width) };
}

/**
 * Outcome histogram with the asymptote-density overlay.
 */
export function renderHistogram(run: RunDir, eps = DEFAULT_EPS): string {
  const bins = run.histogram();
  if (bins === null) {
    throw new Error(`${run.root} has no histogram table`);
  }
  const overlay = scaledOverlay(bins, eps);
  const yMax = Math.max(...bins.map((b) => b.count), ...overlay.y);
  const frame = new Frame({
    xDomain: [bins[0].binLo, bins[bins.length - 1].binHi],
    yDomain: [0, 1.08 * yMax],
    xLabel: "a_z∞",
    yLabel: "count",
    title: `long-time outcomes (${bins.reduce((acc, b) => acc + b.count, 0)} runs)`,
  });

  for (const b of bins) {
    if (b.count === 0) continue;
    frame.body.push(
      el("rect", {
        x: frame.x(b.binLo),
        y: frame.y(b.count),
        width: frame.x(b.binHi) - frame.x(b.binLo),
        height: frame.y(0) - frame.y(b.count),
        fill: COLORS.blue,
        "fill-opacity": 0.65,
        stroke: "#ffffff",
        "stroke-width": 0.5,
      }),
    );
  }
  frame.body.push(
    el("path", {
      d: linePath(overlay.a.map(frame.x), overlay.y.map(frame.y)),
      fill: "none",
      stroke: COLORS.red,
      "stroke-width": 1.8,
    }),
  );
  frame.legend([
    { label: "outcomes", color: COLORS.blue },
    { label: "density fit", color: COLORS.red },
  ]);
  return svgDocument(frame.width, frame.height, frame.finish());
}

export { asymptoteDensity };
