import { linearScale, ticks, formatTick } from "./scale.js";
import { el, text, fmt } from "./svg.js";

/** Shared curve colors, matching the usual three-component convention. */
export const COLORS = {
  blue: "#1f77b4",
  green: "#2ca02c",
  red: "#d62728",
  orange: "#ff7f0e",
  gray: "#9a9a9a",
};

export interface Tick {
  value: number;
  label: string;
}

export interface FrameSpec {
  width?: number;
  height?: number;
  margin?: { top: number; right: number; bottom: number; left: number };
  xDomain: [number, number];
  yDomain: [number, number];
  xLabel: string;
  yLabel: string;
  title?: string;
  xTicks?: Tick[];
  yTicks?: Tick[];
}

/**
 * A rectangular plot frame: scales, axes, grid, and labels.
 *
 * Figures map data through `x`/`y` and push SVG fragments onto `body`;
 * `finish()` lays the frame underneath and returns the fragment list.
 */
export class Frame {
  readonly width: number;
  readonly height: number;
  readonly margin: { top: number; right: number; bottom: number; left: number };
  readonly x: (v: number) => number;
  readonly y: (v: number) => number;
  readonly spec: FrameSpec;
  readonly body: string[] = [];

  constructor(spec: FrameSpec) {
    this.spec = spec;
    this.width = spec.width ?? 560;
    this.height = spec.height ?? 360;
    this.margin = spec.margin ?? { top: spec.title ? 34 : 16, right: 16, bottom: 44, left: 54 };
    this.x = linearScale(spec.xDomain, [this.margin.left, this.width - this.margin.right]);
    this.y = linearScale(spec.yDomain, [this.height - this.margin.bottom, this.margin.top]);
  }

  plotLeft(): number {
    return this.margin.left;
  }

  plotRight(): number {
    return this.width - this.margin.right;
  }

  plotTop(): number {
    return this.margin.top;
  }

  plotBottom(): number {
    return this.height - this.margin.bottom;
  }

  private axes(): string[] {
    const parts: string[] = [];
    const [x0, x1] = this.spec.xDomain;
    const [y0, y1] = this.spec.yDomain;
    const xTicks =
      this.spec.xTicks ?? ticks(x0, x1).map((v) => ({ value: v, label: formatTick(v) }));
    const yTicks =
      this.spec.yTicks ?? ticks(y0, y1).map((v) => ({ value: v, label: formatTick(v) }));
    for (const { value: tx, label } of xTicks) {
      const px = this.x(tx);
      parts.push(
        el("line", {
          x1: px,
          x2: px,
          y1: this.plotTop(),
          y2: this.plotBottom(),
          stroke: "#e0e0e0",
          "stroke-width": 1,
        }),
        el("line", {
          x1: px,
          x2: px,
          y1: this.plotBottom(),
          y2: this.plotBottom() + 4,
          stroke: "#333333",
          "stroke-width": 1,
        }),
        text(px, this.plotBottom() + 16, label, { "text-anchor": "middle" }),
      );
    }
    for (const { value: ty, label } of yTicks) {
      const py = this.y(ty);
      parts.push(
        el("line", {
          x1: this.plotLeft(),
          x2: this.plotRight(),
          y1: py,
          y2: py,
          stroke: "#e0e0e0",
          "stroke-width": 1,
        }),
        el("line", {
          x1: this.plotLeft() - 4,
          x2: this.plotLeft(),
          y1: py,
          y2: py,
          stroke: "#333333",
          "stroke-width": 1,
        }),
        text(this.plotLeft() - 7, py + 4, label, { "text-anchor": "end" }),
      );
    }
    parts.push(
      el("rect", {
        x: this.plotLeft(),
        y: this.plotTop(),
        width: this.plotRight() - this.plotLeft(),
        height: this.plotBottom() - this.plotTop(),
        fill: "none",
        stroke: "#333333",
        "stroke-width": 1,
      }),
      text((this.plotLeft() + this.plotRight()) / 2, this.height - 8, this.spec.xLabel, {
        "text-anchor": "middle",
      }),
      el(
        "g",
        { transform: `translate(14 ${fmt((this.plotTop() + this.plotBottom()) / 2)}) rotate(-90)` },
        text(0, 0, this.spec.yLabel, { "text-anchor": "middle" }),
      ),
    );
    if (this.spec.title) {
      parts.push(
        text(this.width / 2, 18, this.spec.title, {
          "text-anchor": "middle",
          "font-size": 13,
        }),
      );
    }
    return parts;
  }

  /** Legend swatches anchored at the top-right of the plot area. */
  legend(entries: Array<{ label: string; color: string; dash?: string }>): void {
    const x0 = this.plotRight() - 110;
    let y = this.plotTop() + 14;
    for (const e of entries) {
      const lineAttrs: Record<string, string | number> = {
        x1: x0,
        x2: x0 + 22,
        y1: y - 4,
        y2: y - 4,
        stroke: e.color,
        "stroke-width": 2,
      };
      if (e.dash) lineAttrs["stroke-dasharray"] = e.dash;
      this.body.push(el("line", lineAttrs), text(x0 + 28, y, e.label));
      y += 16;
    }
  }

  finish(): string[] {
    return [...this.axes(), ...this.body];
  }
}
