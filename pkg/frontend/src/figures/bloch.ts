import { RunDir, TraceEntry } from "../rundir.js";
import { Frame, COLORS } from "../plot.js";
import { extent, padded } from "../scale.js";
import { el, linePath, svgDocument } from "../svg.js";

/** Time axis label; trajectories are sampled on the scaled time grid. */
export function timeLabel(run: RunDir): string {
  return run.family() === "fig1" ? "ω₁ t" : "ω_c t";
}

function subtitle(entry: TraceEntry): string {
  const tags: string[] = [entry.kind];
  if (entry.case !== undefined) tags.push(entry.case);
  if (entry.phi !== undefined) tags.push(`φ = ${entry.phi.toFixed(4)}`);
  if (entry.seed !== null) tags.push(`seed ${entry.seed}`);
  return tags.join(", ");
}

/**
 * Bloch-vector components of one trajectory against scaled time.
 */
export function renderBloch(run: RunDir, traceName?: string): string {
  const entries = run.traceEntries();
  if (entries.length === 0) throw new Error(`no traces listed in ${run.root}`);
  const name = traceName ?? entries[0].name;
  const entry = entries.find((e) => e.name === name);
  if (entry === undefined) throw new Error(`no trace '${name}' in ${run.root}`);
  const trace = run.trace(name);

  const yLo = Math.min(-1, extent([...trace.aX, ...trace.aY, ...trace.aZ])[0]);
  const yHi = Math.max(1, extent([...trace.aX, ...trace.aY, ...trace.aZ])[1]);
  const frame = new Frame({
    xDomain: [trace.t[0], trace.t[trace.t.length - 1]],
    yDomain: padded([yLo, yHi], 0.04),
    xLabel: timeLabel(run),
    yLabel: "Bloch components",
    title: `${name} (${subtitle(entry)})`,
  });

  const tPx = trace.t.map(frame.x);
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
      d: linePath(tPx, trace.aX.map(frame.y)),
      fill: "none",
      stroke: COLORS.blue,
      "stroke-width": 1.5,
    }),
    el("path", {
      d: linePath(tPx, trace.aY.map(frame.y)),
      fill: "none",
      stroke: COLORS.green,
      "stroke-width": 1.5,
    }),
    el("path", {
      d: linePath(tPx, trace.aZ.map(frame.y)),
      fill: "none",
      stroke: COLORS.red,
      "stroke-width": 1.5,
    }),
  );
  frame.legend([
    { label: "a_x", color: COLORS.blue },
    { label: "a_y", color: COLORS.green },
    { label: "a_z", color: COLORS.red },
  ]);
  return svgDocument(frame.width, frame.height, frame.finish());
}
