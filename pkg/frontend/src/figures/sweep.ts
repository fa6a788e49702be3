import { RunDir } from "../rundir.js";
import { Frame, COLORS, Tick } from "../plot.js";
import { el, linePath, svgDocument } from "../svg.js";

const PI_TICKS: Tick[] = [
  { value: 0, label: "0" },
  { value: Math.PI / 12, label: "π/12" },
  { value: Math.PI / 6, label: "π/6" },
  { value: Math.PI / 4, label: "π/4" },
  { value: Math.PI / 3, label: "π/3" },
  { value: (5 * Math.PI) / 12, label: "5π/12" },
  { value: Math.PI / 2, label: "π/2" },
];

/**
 * Long-time polarization against the superposition mixing angle, with
 * the incoherent-mixture prediction cos(2φ) for comparison.
 *
 * Error bars show the convergence-window standard deviation of each
 * sweep run (often smaller than the marker).
 */
export function renderSweep(run: RunDir): string {
  const rows = run.asymptotes().filter((r) => r.kind === "sweep" && r.phi !== null);
  if (rows.length === 0) {
    throw new Error(`${run.root} has no sweep asymptotes (only family D campaigns produce them)`);
  }
  rows.sort((a, b) => (a.phi as number) - (b.phi as number));

  const frame = new Frame({
    xDomain: [-0.06, Math.PI / 2 + 0.06],
    yDomain: [-1.15, 1.15],
    xLabel: "mixing angle φ",
    yLabel: "a_z∞",
    title: `superposition sweep (${rows.length} angles)`,
    xTicks: PI_TICKS,
  });

  const fit: { x: number[]; y: number[] } = { x: [], y: [] };
  for (let i = 0; i <= 200; i++) {
    const phi = (Math.PI / 2) * (i / 200);
    fit.x.push(frame.x(phi));
    fit.y.push(frame.y(Math.cos(2 * phi)));
  }
  frame.body.push(
    el("line", {
      x1: frame.plotLeft(),
      x2: frame.plotRight(),
      y1: frame.y(0),
      y2: frame.y(0),
      stroke: COLORS.gray,
      "stroke-width": 1,
      "stroke-dasharray": "4 3",
    }),
    el("path", {
      d: linePath(fit.x, fit.y),
      fill: "none",
      stroke: COLORS.red,
      "stroke-width": 1.8,
    }),
  );
  for (const r of rows) {
    const px = frame.x(r.phi as number);
    frame.body.push(
      el("line", {
        x1: px,
        x2: px,
        y1: frame.y(r.aZInf - r.windowStd),
        y2: frame.y(r.aZInf + r.windowStd),
        stroke: COLORS.blue,
        "stroke-width": 1.2,
      }),
      el("circle", {
        cx: px,
        cy: frame.y(r.aZInf),
        r: 3.5,
        fill: r.converged ? COLORS.blue : "#ffffff",
        stroke: COLORS.blue,
        "stroke-width": 1.2,
      }),
    );
  }
  frame.legend([
    { label: "a_z∞(φ)", color: COLORS.blue },
    { label: "cos 2φ", color: COLORS.red },
  ]);
  return svgDocument(frame.width, frame.height, frame.finish());
}
