/**
 * Output dispatch: write an SVG document as-is, or rasterize it to PNG
 * when the output path ends in .png.
 */

import { writeFileSync } from "node:fs";
import { extname } from "node:path";
import { Resvg } from "@resvg/resvg-js";

export function writeFigure(svg: string, outputPath: string): void {
  const ext = extname(outputPath).toLowerCase();
  if (ext === ".svg") {
    writeFileSync(outputPath, svg, "utf8");
    return;
  }
  if (ext === ".png") {
    const png = new Resvg(svg, { fitTo: { mode: "zoom", value: 2 } })
      .render()
      .asPng();
    writeFileSync(outputPath, png);
    return;
  }
  throw new Error(
    `unsupported output extension '${ext || "(none)"}': use .svg or .png`,
  );
}
