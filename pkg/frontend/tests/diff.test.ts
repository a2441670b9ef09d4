import { describe, expect, it } from "vitest";
import { adjacencyDiff, formatMatrix } from "../src/diff.js";
import { trajectoryArc } from "../src/draw.js";
import type { GraphDoc } from "../src/api.js";

describe("adjacency diff", () => {
  it("reports a node-count mismatch", () => {
    const d = adjacencyDiff(
      [
        [0, 1],
        [1, 0],
      ],
      [
        [0, 1, 0],
        [1, 0, 1],
        [0, 1, 0],
      ],
    );
    expect(d.sameShape).toBe(false);
    expect(d.changedCells).toEqual([]);
    expect(d.summary).toBe("plan expects 2 nodes, garment has 3");
  });

  it("lists changed cells for same-shape matrices", () => {
    const d = adjacencyDiff(
      [
        [0, 1],
        [1, 0],
      ],
      [
        [0, 0],
        [0, 0],
      ],
    );
    expect(d.sameShape).toBe(true);
    expect(d.changedCells).toEqual([
      [0, 1],
      [1, 0],
    ]);
    expect(d.summary).toBe("2 adjacency cells differ");
  });

  it("formats matrices one row per line", () => {
    expect(
      formatMatrix([
        [0, 1],
        [1, 0],
      ]),
    ).toBe("0 1\n1 0");
  });
});

describe("trajectory arc", () => {
  const graph: GraphDoc = {
    nodes: [
      { id: 0, x: 0, y: 100, kind: "endpoint", moved: false },
      { id: 1, x: 100, y: 100, kind: "endpoint", moved: false },
    ],
    edges: [],
    bbox: [0, 0, 100, 100],
    dims: [200, 200],
  };

  it("lifts the middle node by the slider height", () => {
    const arc = trajectoryArc({ graph, pick: 0, place: 1, height: 30, pending: null });
    expect(arc).not.toBeNull();
    expect(arc!.mid[0]).toBeCloseTo(50);
    expect(arc!.mid[1]).toBeCloseTo(70); // 100 - 30, arcs render upward
  });

  it("returns nothing without a full selection", () => {
    expect(trajectoryArc({ graph, pick: 0, place: null, height: 30, pending: null })).toBeNull();
  });
});
