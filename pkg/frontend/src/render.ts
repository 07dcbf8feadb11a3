/** SVG scatter rendering: spectral count N against isoperimetric ratio I,
 * one marker class per family, hollow markers for uncertified rows. */

import { SweepRow } from "./schema.js";

export interface PlotSpec {
  rows: SweepRow[];
  title?: string;
  width?: number;
  height?: number;
  xLabel?: string;
  yLabel?: string;
}

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

const MARGIN = { top: 42, right: 24, bottom: 46, left: 56 };

interface Scale {
  lo: number;
  hi: number;
  apply(v: number): number;
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (!(hi > lo)) {
    hi = lo + 1;
    lo = lo - 1;
  }
  const k = (outHi - outLo) / (hi - lo);
  return { lo, hi, apply: (v) => outLo + (v - lo) * k };
}

function niceTicks(lo: number, hi: number, n = 6): number[] {
  const span = hi - lo;
  const rawStep = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= n) ?? mag * 10;
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-9 * span; v += step) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Marker path generators per family index; all centered on (0, 0). */
function markerShape(kind: number, r: number): string {
  switch (kind % 5) {
    case 0: // circle
      return `<circle r="${r}"`;
    case 1: // square
      return `<rect x="${-r}" y="${-r}" width="${2 * r}" height="${2 * r}"`;
    case 2: // diamond
      return `<path d="M0 ${-1.3 * r} L${1.3 * r} 0 L0 ${1.3 * r} L${-1.3 * r} 0 Z"`;
    case 3: // upward triangle
      return `<path d="M0 ${-1.25 * r} L${1.15 * r} ${0.95 * r} L${-1.15 * r} ${0.95 * r} Z"`;
    default: // downward triangle
      return `<path d="M0 ${1.25 * r} L${1.15 * r} ${-0.95 * r} L${-1.15 * r} ${-0.95 * r} Z"`;
  }
}

/** Render the scatter; every row becomes exactly one marker element tagged
 * with class="marker", so marker count equals row count. */
export function renderScatter(spec: PlotSpec): string {
  const rows = spec.rows;
  if (rows.length === 0) {
    throw new Error("nothing to render: no rows");
  }
  const width = spec.width ?? 720;
  const height = spec.height ?? 480;
  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = height - MARGIN.top - MARGIN.bottom;

  const xs = rows.map((r) => r.isoRatio).filter((v) => Number.isFinite(v));
  const ys = rows.map((r) => r.count).filter((v) => Number.isFinite(v));
  const padX = 0.04 * (Math.max(...xs) - Math.min(...xs) || 1);
  const padY = 0.06 * (Math.max(...ys) - Math.min(...ys) || 1);
  const sx = linearScale(Math.min(...xs) - padX, Math.max(...xs) + padX, 0, innerW);
  const sy = linearScale(Math.min(...ys) - padY, Math.max(...ys) + padY, innerH, 0);

  const families = [...new Set(rows.map((r) => r.family))];
  const colorOf = new Map(families.map((f, i) => [f, PALETTE[i % PALETTE.length]]));
  const shapeOf = new Map(families.map((f, i) => [f, i]));

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  if (spec.title) {
    parts.push(
      `<text x="${width / 2}" y="22" text-anchor="middle" font-size="15">` +
        `${esc(spec.title)}</text>`,
    );
  }
  parts.push(`<g transform="translate(${MARGIN.left},${MARGIN.top})">`);

  // axes, ticks, grid
  parts.push(`<rect width="${innerW}" height="${innerH}" fill="none" stroke="#333"/>`);
  for (const t of niceTicks(sx.lo, sx.hi)) {
    const x = sx.apply(t);
    parts.push(`<line x1="${x}" y1="0" x2="${x}" y2="${innerH}" stroke="#ddd"/>`);
    parts.push(
      `<text x="${x}" y="${innerH + 18}" text-anchor="middle">${t}</text>`,
    );
  }
  for (const t of niceTicks(sy.lo, sy.hi)) {
    const y = sy.apply(t);
    parts.push(`<line x1="0" y1="${y}" x2="${innerW}" y2="${y}" stroke="#ddd"/>`);
    parts.push(
      `<text x="-8" y="${y + 4}" text-anchor="end">${t}</text>`,
    );
  }
  parts.push(
    `<text x="${innerW / 2}" y="${innerH + 38}" text-anchor="middle">` +
      `${esc(spec.xLabel ?? "isoperimetric ratio I")}</text>`,
  );
  parts.push(
    `<text transform="translate(${-42},${innerH / 2}) rotate(-90)" ` +
      `text-anchor="middle">${esc(spec.yLabel ?? "spectral count N")}</text>`,
  );

  // markers: exactly one element per row; hollow when not converged
  for (const row of rows) {
    const x = sx.apply(row.isoRatio);
    const y = sy.apply(row.count);
    const color = colorOf.get(row.family)!;
    const shape = markerShape(shapeOf.get(row.family)!, 4.2);
    const paint = row.converged
      ? `fill="${color}" stroke="none"`
      : `fill="none" stroke="${color}" stroke-width="1.4"`;
    const title = `${row.family}(${row.param}${row.seed ? ";" + row.seed : ""}): ` +
      `N=${row.count}, I=${row.isoRatio.toFixed(3)}`;
    parts.push(
      `<g class="marker" data-family="${esc(row.family)}" ` +
        `data-converged="${row.converged}" transform="translate(${x},${y})">` +
        `${shape} ${paint}/><title>${esc(title)}</title></g>`,
    );
  }

  // legend, one entry per family
  const legendX = innerW - 130;
  families.forEach((family, i) => {
    const y = 14 + 18 * i;
    const color = colorOf.get(family)!;
    const shape = markerShape(shapeOf.get(family)!, 4.2);
    parts.push(
      `<g class="legend-entry" transform="translate(${legendX},${y})">` +
        `${shape} fill="${color}"/>` +
        `<text x="12" y="4">${esc(family)}</text></g>`,
    );
  });

  parts.push("</g>");
  parts.push("</svg>");
  return parts.join("\n");
}

export function countMarkers(svg: string): number {
  return (svg.match(/class="marker"/g) ?? []).length;
}

export function countHollowMarkers(svg: string): number {
  return (svg.match(/data-converged="false"/g) ?? []).length;
}

export function legendFamilies(svg: string): string[] {
  const out: string[] = [];
  const re = /class="legend-entry"[^>]*>.*?<text[^>]*>([^<]*)<\/text>/g;
  for (const m of svg.matchAll(re)) {
    out.push(m[1]);
  }
  return out;
}
