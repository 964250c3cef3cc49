/**
 * Minimal deterministic SVG scene building: linear/log scales, tick
 * generation, and element helpers.  Everything renders to plain
 * strings; identical inputs produce byte-identical documents.
 */

export interface Scale {
  kind: "linear" | "log";
  toPx(value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  return {
    kind: "linear",
    domain,
    range,
    toPx: (v) => r0 + ((v - d0) / span) * (r1 - r0),
  };
}

export function logScale(
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale needs a positive domain, got [${d0}, ${d1}]`);
  }
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 === 0 ? 1 : Math.log10(d1) - l0;
  return {
    kind: "log",
    domain,
    range,
    toPx: (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0),
  };
}

/** Decade ticks covering the domain; at most one per power of ten. */
export function logTicks(domain: [number, number]): number[] {
  const lo = Math.ceil(Math.log10(domain[0]) - 1e-9);
  const hi = Math.floor(Math.log10(domain[1]) + 1e-9);
  const ticks: number[] = [];
  for (let e = lo; e <= hi; e += 1) ticks.push(10 ** e);
  return ticks;
}

export function linearTicks(domain: [number, number], count = 6): number[] {
  const [lo, hi] = domain;
  const rawStep = (hi - lo) / Math.max(count - 1, 1);
  if (rawStep <= 0) return [lo];
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-12 * Math.abs(hi); v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

export function formatTick(value: number): string {
  if (value === 0) return "0";
  const exponent = Math.floor(Math.log10(Math.abs(value)));
  if (exponent >= 4 || exponent <= -3) {
    const mantissa = value / 10 ** exponent;
    const m = Number(mantissa.toPrecision(3));
    return m === 1 ? `1e${exponent}` : `${m}e${exponent}`;
  }
  return String(Number(value.toPrecision(6)));
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const px = (v: number): string => v.toFixed(2);

export function svgLine(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  attrs: string,
): string {
  return `<line x1="${px(x1)}" y1="${px(y1)}" x2="${px(x2)}" y2="${px(y2)}" ${attrs}/>`;
}

export function svgPolyline(points: Array<[number, number]>, attrs: string): string {
  const path = points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${px(x)} ${px(y)}`)
    .join(" ");
  return `<path d="${path}" fill="none" ${attrs}/>`;
}

export function svgCircle(cx: number, cy: number, r: number, attrs: string): string {
  return `<circle cx="${px(cx)}" cy="${px(cy)}" r="${px(r)}" ${attrs}/>`;
}

export function svgText(
  x: number,
  y: number,
  text: string,
  attrs: string,
): string {
  return `<text x="${px(x)}" y="${px(y)}" ${attrs}>${escapeXml(text)}</text>`;
}

export function svgRect(
  x: number,
  y: number,
  width: number,
  height: number,
  attrs: string,
): string {
  return `<rect x="${px(x)}" y="${px(y)}" width="${px(width)}" height="${px(height)}" ${attrs}/>`;
}

export interface AxisOptions {
  scale: Scale;
  ticks: number[];
  label: string;
  /** pixel position of the perpendicular axis line */
  cross: number;
  orientation: "bottom" | "left";
  plotSpan: [number, number];
}

/** Axis line, ticks, tick labels, grid lines, and the axis label. */
export function drawAxis(options: AxisOptions): string {
  const { scale, ticks, label, cross, orientation, plotSpan } = options;
  const parts: string[] = [];
  const tickStyle = 'stroke="#333" stroke-width="1"';
  const gridStyle = 'stroke="#ddd" stroke-width="0.5"';
  const textStyle =
    'font-family="Helvetica, Arial, sans-serif" font-size="11" fill="#333"';
  const axisLabelStyle =
    'font-family="Helvetica, Arial, sans-serif" font-size="13" fill="#333"';
  if (orientation === "bottom") {
    parts.push(svgLine(scale.range[0], cross, scale.range[1], cross, tickStyle));
    for (const t of ticks) {
      const x = scale.toPx(t);
      parts.push(svgLine(x, plotSpan[0], x, plotSpan[1], gridStyle));
      parts.push(svgLine(x, cross, x, cross + 5, tickStyle));
      parts.push(
        svgText(x, cross + 18, formatTick(t), `${textStyle} text-anchor="middle"`),
      );
    }
    const mid = (scale.range[0] + scale.range[1]) / 2;
    parts.push(
      svgText(mid, cross + 36, label, `${axisLabelStyle} text-anchor="middle"`),
    );
  } else {
    parts.push(svgLine(cross, scale.range[0], cross, scale.range[1], tickStyle));
    for (const t of ticks) {
      const y = scale.toPx(t);
      parts.push(svgLine(plotSpan[0], y, plotSpan[1], y, gridStyle));
      parts.push(svgLine(cross - 5, y, cross, y, tickStyle));
      parts.push(
        svgText(cross - 8, y + 4, formatTick(t), `${textStyle} text-anchor="end"`),
      );
    }
    const mid = (scale.range[0] + scale.range[1]) / 2;
    parts.push(
      `<text x="${px(cross - 45)}" y="${px(mid)}" ` +
        `font-family="Helvetica, Arial, sans-serif" font-size="13" fill="#333" ` +
        `text-anchor="middle" transform="rotate(-90 ${px(cross - 45)} ${px(mid)})">` +
        `${escapeXml(label)}</text>`,
    );
  }
  return parts.join("\n");
}

export function svgDocument(
  width: number,
  height: number,
  content: string,
): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    `${content}\n</svg>\n`
  );
}
