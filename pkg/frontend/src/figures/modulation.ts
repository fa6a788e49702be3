import { RunDir, ModulationSample } from "../rundir.js";
import { Frame, COLORS } from "../plot.js";
import { timeLabel } from "./bloch.js";
import { extent, padded } from "../scale.js";
import { el, linePath, svgDocument } from "../svg.js";

function curves(frame: Frame, rows: ModulationSample[], dash?: string): void {
  const tPx = rows.map((r) => frame.x(r.t));
  const attrs = (color: string) => {
    const a: Record<string, string | number> = {
      fill: "none",
      stroke: color,
      "stroke-width": 1.8,
    };
    if (dash) a["stroke-dasharray"] = dash;
    return a;
  };
  frame.body.push(
    el("path", { d: linePath(tPx, rows.map((r) => frame.y(r.fO))), ...attrs(COLORS.blue) }),
    el("path", { d: linePath(tPx, rows.map((r) => frame.y(r.fOE))), ...attrs(COLORS.orange) }),
  );
}

/**
 * Modulation profiles: spin self-energy factor f_O and coupling factor
 * f_OE on the sample grid; family C's second-measurement profiles are
 * drawn dashed when present.
 */
export function renderModulation(run: RunDir): string {
  const rows = run.modulation();
  if (rows === null) {
    throw new Error(`${run.root} has no modulation table (exact-oracle campaigns carry none)`);
  }
  const second = run.modulationSecond();
  const all = second === null ? rows : [...rows, ...second];
  const values = all.flatMap((r) => [r.fO, r.fOE]);
  const tEnd = Math.max(...all.map((r) => r.t));

  const frame = new Frame({
    xDomain: [0, tEnd],
    yDomain: padded([Math.min(0, extent(values)[0]), extent(values)[1]], 0.06),
    xLabel: timeLabel(run),
    yLabel: "modulation",
    title: second === null ? "drive profiles" : "drive profiles (second measurement dashed)",
  });

  curves(frame, rows);
  if (second !== null) curves(frame, second, "5 4");
  frame.legend([
    { label: "f_O", color: COLORS.blue },
    { label: "f_OE", color: COLORS.orange },
  ]);
  return svgDocument(frame.width, frame.height, frame.finish());
}
