/** Pure chart geometry: SVG paths for convergence trends and the
 * 2-D projection of the shrinking uncertainty region. */

export interface Point {
  x: number;
  y: number;
}

/** SVG polyline path for a series, scaled into width x height with a
 * zero-anchored y axis (monotone trends read correctly). */
export function trendPath(
  values: number[],
  width: number,
  height: number,
  pad = 4,
): string {
  if (values.length === 0) return "";
  const maxV = Math.max(...values, 1e-12);
  const innerW = width - 2 * pad;
  const innerH = height - 2 * pad;
  const step = values.length > 1 ? innerW / (values.length - 1) : 0;
  return values
    .map((v, i) => {
      const x = pad + i * step;
      const y = pad + innerH * (1 - v / maxV);
      return `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`;
    })
    .join(" ");
}

/** Project sigma-space vertices (dim <= 3) onto the drawing plane. */
export function projectVertices(vertices: number[][]): Point[] {
  return vertices.map((v) => {
    if (v.length === 1) return { x: v[0], y: 0.5 };
    if (v.length === 2) return { x: v[0], y: v[1] };
    // isometric-style projection for dim 3
    return { x: v[0] + 0.5 * v[2], y: v[1] + 0.35 * v[2] };
  });
}

/** Order projected points counterclockwise around their centroid so the
 * region renders as a polygon outline. */
export function outlineOrder(points: Point[]): Point[] {
  if (points.length <= 2) return [...points];
  const cx = points.reduce((s, p) => s + p.x, 0) / points.length;
  const cy = points.reduce((s, p) => s + p.y, 0) / points.length;
  return [...points].sort(
    (a, b) => Math.atan2(a.y - cy, a.x - cx) - Math.atan2(b.y - cy, b.x - cx),
  );
}

/** SVG path for the projected region outline scaled into a viewport. */
export function regionPath(
  vertices: number[][],
  width: number,
  height: number,
  pad = 8,
): string {
  const pts = outlineOrder(projectVertices(vertices));
  if (pts.length === 0) return "";
  const xs = pts.map((p) => p.x);
  const ys = pts.map((p) => p.y);
  const minX = Math.min(...xs);
  const maxX = Math.max(...xs);
  const minY = Math.min(...ys);
  const maxY = Math.max(...ys);
  const spanX = Math.max(maxX - minX, 1e-9);
  const spanY = Math.max(maxY - minY, 1e-9);
  const scale = Math.min((width - 2 * pad) / spanX, (height - 2 * pad) / spanY);
  const path = pts
    .map((p, i) => {
      const x = pad + (p.x - minX) * scale;
      const y = height - pad - (p.y - minY) * scale;
      return `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`;
    })
    .join(" ");
  return path + " Z";
}
