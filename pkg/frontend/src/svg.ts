export type Attrs = Record<string, string | number>;

/** Coordinate/length formatting: short, deterministic, locale-free. */
export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate: ${x}`);
  const r = Number(x.toFixed(2));
  return Object.is(r, -0) ? "0" : String(r);
}

export function escapeText(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function attrString(attrs: Attrs): string {
  return Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? fmt(v) : escapeText(v)}"`)
    .join("");
}

/** One SVG element; children are pre-rendered strings. */
export function el(tag: string, attrs: Attrs, children?: string | string[]): string {
  const open = `<${tag}${attrString(attrs)}`;
  if (children === undefined) return `${open}/>`;
  const body = Array.isArray(children) ? children.join("") : children;
  return `${open}>${body}</${tag}>`;
}

export function text(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return el(
    "text",
    { x, y, "font-family": "sans-serif", "font-size": 12, ...attrs },
    escapeText(content),
  );
}

/** Polyline path through the points, skipping non-finite gaps. */
export function linePath(xs: number[], ys: number[]): string {
  const parts: string[] = [];
  let pen = false;
  for (let i = 0; i < xs.length; i++) {
    if (!Number.isFinite(xs[i]) || !Number.isFinite(ys[i])) {
      pen = false;
      continue;
    }
    parts.push(`${pen ? "L" : "M"}${fmt(xs[i])} ${fmt(ys[i])}`);
    pen = true;
  }
  return parts.join("");
}

export function svgDocument(width: number, height: number, body: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">` +
    el("rect", { width, height, fill: "#ffffff" }) +
    body.join("") +
    `</svg>\n`
  );
}
