import { Resvg } from "@resvg/resvg-js";

/** Rasterize SVG text to PNG bytes at 2x scale for crisp text. */
export function rasterize(svg: string): Buffer {
  const renderer = new Resvg(svg, {
    fitTo: { mode: "zoom", value: 2 },
    background: "#ffffff",
  });
  return renderer.render().asPng();
}
