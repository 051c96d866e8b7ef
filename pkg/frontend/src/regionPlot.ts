/**
 * SVG plot of 2-feature decision regions.
 *
 * Coordinates are parsed to floats here for pixel layout only. That is a
 * presentational approximation; anything the user reads as a value (the
 * hover titles, the region list next to the plot) stays the exact string.
 */

import { escapeHtml } from "./transcript.js";
import type { RegionEntry, RegionsPayload } from "./types.js";

const PALETTE = [
  "#4e79a7",
  "#f28e2b",
  "#59a14f",
  "#e15759",
  "#b07aa1",
  "#76b7b2",
  "#edc948",
];

function toNumber(exact: string): number {
  if (exact.includes("/")) {
    const [p, q] = exact.split("/");
    return Number(p) / Number(q);
  }
  return Number(exact);
}

export interface PlotPoint {
  x: string;
  y: string;
  label: string;
}

export function regionPlot(
  payload: RegionsPayload,
  points: PlotPoint[] = [],
  size = 420,
): string {
  const drawable = payload.regions.filter(
    (r): r is RegionEntry & { vertices: [string, string][] } =>
      r.vertices !== undefined && r.vertices.length >= 3,
  );
  if (drawable.length === 0) {
    return `<p class="empty">No bounded two-feature regions to draw.</p>`;
  }

  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  for (const region of drawable) {
    for (const [vx, vy] of region.vertices) {
      const x = toNumber(vx);
      const y = toNumber(vy);
      minX = Math.min(minX, x);
      minY = Math.min(minY, y);
      maxX = Math.max(maxX, x);
      maxY = Math.max(maxY, y);
    }
  }
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const pad = 0.06 * Math.max(spanX, spanY);
  const scale = size / Math.max(spanX + 2 * pad, spanY + 2 * pad);
  const px = (x: number) => (x - minX + pad) * scale;
  // SVG y grows downward; the feature axis grows upward.
  const py = (y: number) => size - (y - minY + pad) * scale;

  const labels = [...new Set(payload.regions.map((r) => r.label))].sort();
  const color = (label: string) =>
    PALETTE[labels.indexOf(label) % PALETTE.length]!;

  const shapes: string[] = [];
  for (const region of drawable) {
    const pts = region.vertices
      .map(([vx, vy]) => `${px(toNumber(vx)).toFixed(1)},${py(toNumber(vy)).toFixed(1)}`)
      .join(" ");
    const title =
      `path ${region.path_id}: label ${region.label} [${region.confidence}]\n` +
      region.atoms.join(", ");
    shapes.push(
      `<polygon points="${pts}" fill="${color(region.label)}" ` +
        `fill-opacity="0.45" stroke="${color(region.label)}" stroke-width="1.5">` +
        `<title>${escapeHtml(title)}</title></polygon>`,
    );
    const cx =
      region.vertices.reduce((s, [vx]) => s + toNumber(vx), 0) /
      region.vertices.length;
    const cy =
      region.vertices.reduce((s, [, vy]) => s + toNumber(vy), 0) /
      region.vertices.length;
    shapes.push(
      `<text x="${px(cx).toFixed(1)}" y="${py(cy).toFixed(1)}" ` +
        `text-anchor="middle" class="region-id">${region.path_id}</text>`,
    );
  }
  for (const point of points) {
    const x = px(toNumber(point.x)).toFixed(1);
    const y = py(toNumber(point.y)).toFixed(1);
    shapes.push(
      `<circle cx="${x}" cy="${y}" r="5" class="mark">` +
        `<title>${escapeHtml(`${point.label} (${point.x}, ${point.y})`)}</title></circle>`,
    );
    shapes.push(
      `<text x="${x}" y="${y}" dx="8" dy="4" class="mark-label">` +
        `${escapeHtml(point.label)}</text>`,
    );
  }

  return (
    `<svg viewBox="0 0 ${size} ${size}" role="img" class="region-plot">` +
    shapes.join("") +
    `</svg>`
  );
}

/** Count of regions the plot can actually draw; used by the caption. */
export function drawableCount(payload: RegionsPayload): number {
  return payload.regions.filter(
    (r) => r.vertices !== undefined && r.vertices.length >= 3,
  ).length;
}
