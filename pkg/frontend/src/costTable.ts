/**
 * Operator-cost figure: kernel call counts and wall time against port
 * count, side by side, with a dashed 4x reference over the point-source
 * counts showing where a 2x2 quadrature patch rule must land.
 */

import type { CostTableData } from "./csv.js";
import {
  drawAxis,
  logScale,
  logTicks,
  svgCircle,
  svgDocument,
  svgLine,
  svgPolyline,
  svgRect,
  svgText,
} from "./svg.js";

export interface CostTableOptions {
  title?: string;
}

const WIDTH = 960;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 24, bottom: 56, left: 80 };
const GUTTER = 72;

const COLORS = { pointSource: "#c0392b", patch: "#2471a3", reference: "#777" };
const LABEL_STYLE =
  'font-family="Helvetica, Arial, sans-serif" font-size="12" fill="#333"';

interface Panel {
  yLabel: string;
  pointSource: number[];
  patch: number[];
  reference?: number[];
}

function renderPanel(
  panel: Panel,
  ports: number[],
  plotX: [number, number],
  plotY: [number, number],
): string {
  const xDomain: [number, number] = [Math.min(...ports), Math.max(...ports)];
  const all = [...panel.pointSource, ...panel.patch, ...(panel.reference ?? [])];
  const positive = all.filter((v) => v > 0);
  const yDomain: [number, number] = [
    Math.min(...positive) * 0.8,
    Math.max(...positive) * 1.25,
  ];
  const xScale = logScale(xDomain, plotX);
  const yScale = logScale(yDomain, plotY);

  const parts: string[] = [];
  parts.push(
    drawAxis({
      scale: xScale,
      ticks: ports,
      label: "ports",
      cross: plotY[0],
      orientation: "bottom",
      plotSpan: [plotY[0], plotY[1]],
    }),
  );
  parts.push(
    drawAxis({
      scale: yScale,
      ticks: logTicks(yDomain),
      label: panel.yLabel,
      cross: plotX[0],
      orientation: "left",
      plotSpan: [plotX[0], plotX[1]],
    }),
  );

  const toPoints = (ys: number[]): Array<[number, number]> =>
    ys
      .map((v, i) => [v, i] as const)
      .filter(([v]) => v > 0)
      .map(([v, i]) => [xScale.toPx(ports[i]), yScale.toPx(v)]);

  if (panel.reference) {
    parts.push(
      svgPolyline(
        toPoints(panel.reference),
        `stroke="${COLORS.reference}" stroke-width="1.2" stroke-dasharray="5 4"`,
      ),
    );
    const last = toPoints(panel.reference).at(-1);
    if (last) {
      parts.push(
        svgText(last[0] - 4, last[1] - 8, "4x point-source",
          'font-family="Helvetica, Arial, sans-serif" font-size="12" ' +
            `fill="${COLORS.reference}" text-anchor="end"`),
      );
    }
  }
  for (const [key, color] of [
    ["pointSource", COLORS.pointSource],
    ["patch", COLORS.patch],
  ] as const) {
    const pts = toPoints(panel[key]);
    parts.push(svgPolyline(pts, `stroke="${color}" stroke-width="1.8"`));
    for (const [x, y] of pts) parts.push(svgCircle(x, y, 2.6, `fill="${color}"`));
  }
  return parts.join("\n");
}

export function renderCostTable(
  data: CostTableData,
  options: CostTableOptions = {},
): string {
  if (data.rows.length === 0) {
    throw new Error("cost table has no rows to plot");
  }
  const ports = data.rows.map((r) => r.nPorts);
  const parts: string[] = [];

  const panelWidth = (WIDTH - MARGIN.left - MARGIN.right - GUTTER) / 2;
  const plotY: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top];
  const leftX: [number, number] = [MARGIN.left, MARGIN.left + panelWidth];
  const rightX: [number, number] = [
    MARGIN.left + panelWidth + GUTTER,
    MARGIN.left + panelWidth + GUTTER + panelWidth,
  ];

  parts.push(
    renderPanel(
      {
        yLabel: "kernel evaluations",
        pointSource: data.rows.map((r) => r.evalsPointSource),
        patch: data.rows.map((r) => r.evalsPatch),
        reference: data.rows.map((r) => 4 * r.evalsPointSource),
      },
      ports,
      leftX,
      plotY,
    ),
  );
  parts.push(
    renderPanel(
      {
        yLabel: "wall time (s)",
        pointSource: data.rows.map((r) => r.timePointSourceS),
        patch: data.rows.map((r) => r.timePatchS),
      },
      ports,
      rightX,
      plotY,
    ),
  );

  // Shared legend between the panels' titles.
  const legendX = WIDTH / 2 - 90;
  const legendY = 34;
  parts.push(
    svgRect(legendX - 10, legendY - 12, 220, 20,
      'fill="white" fill-opacity="0.85" stroke="#ccc"'),
  );
  parts.push(
    svgLine(legendX, legendY, legendX + 20, legendY,
      `stroke="${COLORS.pointSource}" stroke-width="2"`),
  );
  parts.push(svgText(legendX + 26, legendY + 4, "point-source", LABEL_STYLE));
  parts.push(
    svgLine(legendX + 120, legendY, legendX + 140, legendY,
      `stroke="${COLORS.patch}" stroke-width="2"`),
  );
  parts.push(svgText(legendX + 146, legendY + 4, "patch", LABEL_STYLE));

  const title = options.title ?? "Operator cost vs port count";
  parts.push(
    svgText(WIDTH / 2, 18, title,
      'font-family="Helvetica, Arial, sans-serif" font-size="15" ' +
        'fill="#111" text-anchor="middle" font-weight="bold"'),
  );

  return svgDocument(WIDTH, HEIGHT, parts.join("\n"));
}
