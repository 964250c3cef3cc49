/**
 * Relative-error-vs-distance figure: one line per evaluation model on
 * shared axes with the Rayleigh distance marked.  Purely presentational;
 * every number comes from the input CSV.
 */

import type { ErrorCurveData } from "./csv.js";
import {
  drawAxis,
  linearScale,
  linearTicks,
  logScale,
  logTicks,
  svgCircle,
  svgDocument,
  svgLine,
  svgPolyline,
  svgRect,
  svgText,
  type Scale,
} from "./svg.js";

export interface ErrorCurveOptions {
  logY?: boolean;
  title?: string;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 32, bottom: 56, left: 76 };

const SERIES = [
  { key: "errPointSource" as const, label: "point-source", color: "#c0392b" },
  { key: "errPatch" as const, label: "patch", color: "#2471a3" },
];

const LABEL_STYLE =
  'font-family="Helvetica, Arial, sans-serif" font-size="12" fill="#333"';

function positiveFloor(values: number[]): number {
  let lo = Infinity;
  for (const v of values) if (v > 0 && v < lo) lo = v;
  return Number.isFinite(lo) ? lo : 1e-16;
}

/** Distances shown in wavelengths when the CSV records the wavelength. */
function distanceAxis(data: ErrorCurveData): { values: number[]; label: string } {
  const wl = Number(data.metadata["wavelength_m"]);
  if (Number.isFinite(wl) && wl > 0) {
    return {
      values: data.distancesM.map((d) => d / wl),
      label: "distance (wavelengths)",
    };
  }
  return { values: data.distancesM.slice(), label: "distance (m)" };
}

export function renderErrorCurves(
  data: ErrorCurveData,
  options: ErrorCurveOptions = {},
): string {
  const logY = options.logY !== false;
  const { values: xs, label: xLabel } = distanceAxis(data);
  const wl = Number(data.metadata["wavelength_m"]);
  const inWavelengths = Number.isFinite(wl) && wl > 0;

  const allErrors = [...data.errPointSource, ...data.errPatch];
  const xDomain: [number, number] = [Math.min(...xs), Math.max(...xs)];
  const yMax = Math.max(...allErrors, 1e-16);
  const yDomain: [number, number] = logY
    ? [positiveFloor(allErrors), yMax]
    : [0, yMax];

  const plotX: [number, number] = [MARGIN.left, WIDTH - MARGIN.right];
  const plotY: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top];
  const xScale = logScale(xDomain, plotX);
  const yScale: Scale = logY
    ? logScale(yDomain, plotY)
    : linearScale(yDomain, plotY);

  const parts: string[] = [];
  parts.push(
    drawAxis({
      scale: xScale,
      ticks: logTicks(xDomain),
      label: xLabel,
      cross: plotY[0],
      orientation: "bottom",
      plotSpan: [plotY[0], plotY[1]],
    }),
  );
  parts.push(
    drawAxis({
      scale: yScale,
      ticks: logY ? logTicks(yDomain) : linearTicks(yDomain),
      label: "relative field error",
      cross: plotX[0],
      orientation: "left",
      plotSpan: [plotX[0], plotX[1]],
    }),
  );

  // Rayleigh distance as a vertical rule, when inside the plotted span.
  const rayleighM = Number(data.metadata["rayleigh_distance_m"]);
  if (Number.isFinite(rayleighM) && rayleighM > 0) {
    const rx = inWavelengths ? rayleighM / wl : rayleighM;
    if (rx >= xDomain[0] && rx <= xDomain[1]) {
      const x = xScale.toPx(rx);
      parts.push(
        svgLine(x, plotY[1], x, plotY[0], 'stroke="#555" stroke-width="1" stroke-dasharray="6 4"'),
      );
      parts.push(
        svgText(
          x + 4,
          plotY[1] + 14,
          "Rayleigh distance",
          `${LABEL_STYLE} text-anchor="start"`,
        ),
      );
    }
  }

  for (const series of SERIES) {
    const points: Array<[number, number]> = [];
    data[series.key].forEach((err, i) => {
      if (!logY || err > 0) points.push([xScale.toPx(xs[i]), yScale.toPx(err)]);
    });
    parts.push(
      svgPolyline(points, `stroke="${series.color}" stroke-width="1.8"`),
    );
    for (const [x, y] of points) {
      parts.push(svgCircle(x, y, 2.2, `fill="${series.color}"`));
    }
  }

  // Legend, top-right inside the plot area.
  const legendX = plotX[1] - 150;
  let legendY = plotY[1] + 10;
  parts.push(
    svgRect(legendX - 10, legendY - 6, 152, SERIES.length * 18 + 10,
      'fill="white" fill-opacity="0.85" stroke="#ccc"'),
  );
  for (const series of SERIES) {
    parts.push(
      svgLine(legendX, legendY + 5, legendX + 24, legendY + 5,
        `stroke="${series.color}" stroke-width="2"`),
    );
    parts.push(
      svgText(legendX + 30, legendY + 9, series.label, LABEL_STYLE),
    );
    legendY += 18;
  }

  const title = options.title ?? "Relative error vs distance";
  parts.push(
    svgText(WIDTH / 2, 24, title,
      'font-family="Helvetica, Arial, sans-serif" font-size="15" ' +
        'fill="#111" text-anchor="middle" font-weight="bold"'),
  );

  return svgDocument(WIDTH, HEIGHT, parts.join("\n"));
}
