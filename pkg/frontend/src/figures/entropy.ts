import { RunDir } from "../rundir.js";
import { Frame, COLORS } from "../plot.js";
import { timeLabel } from "./bloch.js";
import { extent, padded } from "../scale.js";
import { el, linePath, svgDocument, text } from "../svg.js";

const LN2 = Math.log(2);

/**
 * Entropy growth of one trajectory: von Neumann and linear entropy of
 * the reduced spin state, with the ln 2 saturation level marked.
 */
export function renderEntropy(run: RunDir, traceName?: string): string {
  const entries = run.traceEntries();
  if (entries.length === 0) throw new Error(`no traces listed in ${run.root}`);
  const name = traceName ?? entries[0].name;
  const trace = run.trace(name);

  const yHi = Math.max(LN2, extent([...trace.sO, ...trace.sLin])[1]);
  const frame = new Frame({
    xDomain: [trace.t[0], trace.t[trace.t.length - 1]],
    yDomain: padded([0, yHi], 0.05),
    xLabel: timeLabel(run),
    yLabel: "entropy",
    title: `spin entropy, ${name}`,
  });

  const tPx = trace.t.map(frame.x);
  frame.body.push(
    el("line", {
      x1: frame.plotLeft(),
      x2: frame.plotRight(),
      y1: frame.y(LN2),
      y2: frame.y(LN2),
      stroke: COLORS.gray,
      "stroke-width": 1,
      "stroke-dasharray": "4 3",
    }),
    text(frame.plotLeft() + 5, frame.y(LN2) - 4, "ln 2", { fill: "#666666" }),
    el("path", {
      d: linePath(tPx, trace.sO.map(frame.y)),
      fill: "none",
      stroke: COLORS.blue,
      "stroke-width": 1.5,
    }),
    el("path", {
      d: linePath(tPx, trace.sLin.map(frame.y)),
      fill: "none",
      stroke: COLORS.red,
      "stroke-width": 1.5,
    }),
  );
  frame.legend([
    { label: "S_O", color: COLORS.blue },
    { label: "S_lin", color: COLORS.red },
  ]);
  return svgDocument(frame.width, frame.height, frame.finish());
}
