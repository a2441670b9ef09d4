/* Adjacency-diff model for the mismatch intervention panel. */

export interface AdjacencyDiff {
  expected: number[][];
  actual: number[][];
  sameShape: boolean;
  changedCells: [number, number][];
  summary: string;
}

export function adjacencyDiff(expected: number[][], actual: number[][]): AdjacencyDiff {
  const sameShape = expected.length === actual.length;
  const changedCells: [number, number][] = [];
  let summary: string;
  if (!sameShape) {
    summary = `plan expects ${expected.length} nodes, garment has ${actual.length}`;
  } else {
    for (let i = 0; i < expected.length; i++) {
      for (let j = 0; j < expected.length; j++) {
        if (expected[i][j] !== actual[i][j]) changedCells.push([i, j]);
      }
    }
    summary = `${changedCells.length} adjacency cells differ`;
  }
  return { expected, actual, sameShape, changedCells, summary };
}

export function formatMatrix(m: number[][]): string {
  return m.map((row) => row.join(" ")).join("\n");
}
