import { RunDir } from "../rundir.js";
import { Frame, COLORS } from "../plot.js";
import { extent } from "../scale.js";
import { el, svgDocument } from "../svg.js";

/**
 * Sampled initial bath centroids in the complex plane, all runs overlaid.
 *
 * The square, symmetric domain keeps the phase-space geometry honest:
 * a thermal ensemble should look isotropic around the origin.
 */
export function renderScatter(run: RunDir): string {
  const points = run.ensemble();
  if (points === null) {
    throw new Error(`${run.root} has no ensemble table (exact-oracle campaigns sample no bath)`);
  }
  const [reLo, reHi] = extent(points.map((p) => p.reGamma));
  const [imLo, imHi] = extent(points.map((p) => p.imGamma));
  const r = 1.06 * Math.max(Math.abs(reLo), Math.abs(reHi), Math.abs(imLo), Math.abs(imHi), 0.1);
  const nRuns = new Set(points.map((p) => p.runIndex)).size;

  const frame = new Frame({
    width: 430,
    height: 430,
    xDomain: [-r, r],
    yDomain: [-r, r],
    xLabel: "Re γ_n",
    yLabel: "Im γ_n",
    title: `initial bath centroids (${points.length} modes over ${nRuns} runs)`,
  });

  frame.body.push(
    el("line", {
      x1: frame.x(0),
      x2: frame.x(0),
      y1: frame.plotTop(),
      y2: frame.plotBottom(),
      stroke: COLORS.gray,
      "stroke-width": 1,
      "stroke-dasharray": "4 3",
    }),
    el("line", {
      x1: frame.plotLeft(),
      x2: frame.plotRight(),
      y1: frame.y(0),
      y2: frame.y(0),
      stroke: COLORS.gray,
      "stroke-width": 1,
      "stroke-dasharray": "4 3",
    }),
  );
  for (const p of points) {
    frame.body.push(
      el("circle", {
        cx: frame.x(p.reGamma),
        cy: frame.y(p.imGamma),
        r: 2.4,
        fill: COLORS.blue,
        "fill-opacity": 0.55,
      }),
    );
  }
  return svgDocument(frame.width, frame.height, frame.finish());
}
