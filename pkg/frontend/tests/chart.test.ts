import { describe, expect, it } from "vitest";

import { outlineOrder, projectVertices, regionPath, trendPath } from "../src/chart.ts";

describe("trendPath", () => {
  it("renders a single point as a move command", () => {
    const path = trendPath([5], 160, 40);
    expect(path.startsWith("M")).toBe(true);
    expect(path.includes("L")).toBe(false);
  });

  it("maps a decreasing series to increasing y coordinates", () => {
    const path = trendPath([4, 2, 0], 160, 40, 0);
    const ys = [...path.matchAll(/[ML][\d.]+,([\d.]+)/g)].map((m) => Number(m[1]));
    expect(ys.length).toBe(3);
    expect(ys[0]).toBeLessThan(ys[1]);
    expect(ys[1]).toBeLessThan(ys[2]);
  });

  it("is empty for an empty series", () => {
    expect(trendPath([], 160, 40)).toBe("");
  });
});

describe("projectVertices", () => {
  it("keeps 2-d sigma coordinates as-is", () => {
    expect(projectVertices([[0.25, 0.5]])).toEqual([{ x: 0.25, y: 0.5 }]);
  });

  it("projects 3-d points into the plane", () => {
    const [p] = projectVertices([[0, 0, 1]]);
    expect(p.x).toBeCloseTo(0.5);
    expect(p.y).toBeCloseTo(0.35);
  });

  it("lifts 1-d segments onto a horizontal line", () => {
    expect(projectVertices([[0.7]])[0]).toEqual({ x: 0.7, y: 0.5 });
  });
});

describe("outlineOrder", () => {
  it("orders square corners around the centroid", () => {
    const square = [
      { x: 1, y: 1 },
      { x: 0, y: 0 },
      { x: 1, y: 0 },
      { x: 0, y: 1 },
    ];
    const ordered = outlineOrder(square);
    // consecutive points must be edge neighbours (distance 1 on the unit square)
    for (let i = 0; i < ordered.length; i++) {
      const a = ordered[i];
      const b = ordered[(i + 1) % ordered.length];
      const d = Math.hypot(a.x - b.x, a.y - b.y);
      expect(d).toBeCloseTo(1);
    }
  });
});

describe("regionPath", () => {
  it("produces a closed path scaled into the viewport", () => {
    const path = regionPath(
      [
        [0, 0, 0],
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
      ],
      160,
      120,
    );
    expect(path.endsWith("Z")).toBe(true);
    const coords = [...path.matchAll(/([\d.]+),([\d.]+)/g)].map((m) => [
      Number(m[1]),
      Number(m[2]),
    ]);
    for (const [x, y] of coords) {
      expect(x).toBeGreaterThanOrEqual(0);
      expect(x).toBeLessThanOrEqual(160);
      expect(y).toBeGreaterThanOrEqual(0);
      expect(y).toBeLessThanOrEqual(120);
    }
  });
});
