/**
 * Minimal deterministic SVG line figures.  No DOM, no canvas: the
 * renderer is a string builder, so identical data gives identical
 * bytes.  All coordinates go through toFixed(2).
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
}

export interface Axes {
  xLabel: string;
  yLabel: string;
}

export const WIDTH = 640;
export const HEIGHT = 420;
const MARGIN = { left: 64, right: 16, top: 16, bottom: 48 };

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/** Step from the 1/2/5 ladder giving roughly `target` intervals. */
export function niceStep(span: number, target = 6): number {
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

/** Tick positions: integer multiples of the nice step inside [lo, hi]. */
export function ticks(lo: number, hi: number, target = 6): number[] {
  const step = niceStep(hi - lo, target);
  const out: number[] = [];
  for (let i = Math.ceil(lo / step - 1e-9); i * step <= hi + 1e-9 * step; i++) {
    out.push(i === 0 ? 0 : i * step);
  }
  return out;
}

function tickLabel(v: number, step: number): string {
  const dec = Math.max(0, -Math.floor(Math.log10(step) + 1e-9));
  return v.toFixed(dec);
}

function range(values: number[]): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    const pad = Math.max(0.5, Math.abs(lo) * 0.05);
    return [lo - pad, hi + pad];
  }
  const pad = 0.04 * (hi - lo);
  return [lo - pad, hi + pad];
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Small per-series marker at (cx, cy); shapes cycle with the palette. */
function marker(i: number, cx: number, cy: number, color: string): string {
  const c = (v: number) => v.toFixed(2);
  const r = 3.2;
  switch (i % 4) {
    case 0:
      return `<circle cx="${c(cx)}" cy="${c(cy)}" r="${r}" fill="${color}"/>`;
    case 1:
      return (
        `<rect x="${c(cx - r)}" y="${c(cy - r)}" width="${c(2 * r)}" ` +
        `height="${c(2 * r)}" fill="${color}"/>`
      );
    case 2:
      return (
        `<path d="M${c(cx)} ${c(cy - r - 1)}L${c(cx + r + 1)} ${c(cy)}` +
        `L${c(cx)} ${c(cy + r + 1)}L${c(cx - r - 1)} ${c(cy)}Z" fill="${color}"/>`
      );
    default:
      return (
        `<path d="M${c(cx)} ${c(cy - r - 1)}L${c(cx + r + 1)} ${c(cy + r)}` +
        `L${c(cx - r - 1)} ${c(cy + r)}Z" fill="${color}"/>`
      );
  }
}

export function renderFigure(series: Series[], axes: Axes): string {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;

  const [xLo, xHi] = range(series.flatMap((s) => s.x));
  const [yLo, yHi] = range(series.flatMap((s) => s.y));
  const sx = (v: number) => x0 + ((v - xLo) / (xHi - xLo)) * (x1 - x0);
  const sy = (v: number) => y0 - ((v - yLo) / (yHi - yLo)) * (y0 - y1);
  const c = (v: number) => v.toFixed(2);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  const xTicks = ticks(xLo, xHi);
  const yTicks = ticks(yLo, yHi);
  const xStep = niceStep(xHi - xLo);
  const yStep = niceStep(yHi - yLo);

  for (const t of yTicks) {
    parts.push(
      `<line x1="${c(x0)}" y1="${c(sy(t))}" x2="${c(x1)}" y2="${c(sy(t))}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
    );
  }
  for (const t of xTicks) {
    parts.push(
      `<line x1="${c(sx(t))}" y1="${c(y0)}" x2="${c(sx(t))}" y2="${c(y0 + 5)}" ` +
        `stroke="black" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${c(sx(t))}" y="${c(y0 + 18)}" font-size="11" ` +
        `text-anchor="middle">${tickLabel(t, xStep)}</text>`,
    );
  }
  for (const t of yTicks) {
    parts.push(
      `<line x1="${c(x0 - 5)}" y1="${c(sy(t))}" x2="${c(x0)}" y2="${c(sy(t))}" ` +
        `stroke="black" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${c(x0 - 8)}" y="${c(sy(t) + 4)}" font-size="11" ` +
        `text-anchor="end">${tickLabel(t, yStep)}</text>`,
    );
  }
  parts.push(
    `<rect x="${c(x0)}" y="${c(y1)}" width="${c(x1 - x0)}" height="${c(y0 - y1)}" ` +
      `fill="none" stroke="black" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${c((x0 + x1) / 2)}" y="${c(HEIGHT - 10)}" font-size="13" ` +
      `text-anchor="middle">${esc(axes.xLabel)}</text>`,
  );
  parts.push(
    `<text x="16" y="${c((y0 + y1) / 2)}" font-size="13" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${c((y0 + y1) / 2)})">${esc(axes.yLabel)}</text>`,
  );

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = s.x.map((v, j) => `${c(sx(v))},${c(sy(s.y[j]))}`).join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" ` +
        `stroke-width="1.6" class="series"/>`,
    );
    for (let j = 0; j < s.x.length; j++) {
      parts.push(marker(i, sx(s.x[j]), sy(s.y[j]), color));
    }
  });

  // legend, upper left inside the frame
  const lw = 14 + 30 + 6 + 8 * Math.max(...series.map((s) => s.label.length));
  const lh = 8 + 18 * series.length;
  parts.push(
    `<rect x="${c(x0 + 10)}" y="${c(y1 + 10)}" width="${c(lw)}" height="${c(lh)}" ` +
      `fill="white" stroke="#999999" stroke-width="1" class="legend"/>`,
  );
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const ly = y1 + 10 + 8 + 18 * i + 5;
    parts.push(
      `<line x1="${c(x0 + 18)}" y1="${c(ly)}" x2="${c(x0 + 48)}" y2="${c(ly)}" ` +
        `stroke="${color}" stroke-width="1.6"/>`,
    );
    parts.push(marker(i, x0 + 33, ly, color));
    parts.push(
      `<text x="${c(x0 + 54)}" y="${c(ly + 4)}" font-size="12" ` +
        `class="legend-label">${esc(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
