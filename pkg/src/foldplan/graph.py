"""Skeleton-mask to graph conversion, canonical node indexing, node editing.

Nodes are skeleton endpoints (exactly one set 8-neighbor) and junction
clusters (8-connected groups of pixels with three or more set neighbors,
collapsed to the cluster pixel nearest the centroid). Chains of degree-2
pixels between node pixels become edges with traced polylines. Components
consisting solely of degree-2 pixels (pure cycles) get a single anchor node
at their topmost-leftmost pixel and a self-loop edge.

Canonical indexing orders nodes by bbox-normalized y, then normalized x,
then degree descending, so garments of the same class map corresponding
limbs to the same indices regardless of position and size.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import ndimage

from .errors import (
    EmptySkeleton,
    MalformedDocument,
    OffGarment,
    UnknownNode,
)
from .raster import BinaryMask
from .skeleton import SkeletonMask, neighbor_counts, thin

_CONN8 = np.ones((3, 3), dtype=bool)
# Fixed neighbor visiting order (row-major) keeps tracing deterministic.
_NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))

ENDPOINT = "endpoint"
JUNCTION = "junction"

# Default spur threshold: 8 px for a garment spanning a 160x160 bbox,
# scaled with the bbox diagonal.
SPUR_LEN_AT_REF = 8.0
REF_BBOX_DIAGONAL = 160.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class SkeletonNode:
    id: int
    x: int
    y: int
    kind: str
    moved: bool = False
    # Skeleton pixels claimed by this node, (x, y); not serialized.
    cluster: tuple[tuple[int, int], ...] = field(default=(), compare=False, repr=False)

    @property
    def position(self) -> tuple[int, int]:
        return (self.x, self.y)


@dataclass(frozen=True)
class SkeletonEdge:
    a: int
    b: int
    polyline: tuple[tuple[int, int], ...]
    length: float


@dataclass(frozen=True)
class SkeletonGraph:
    nodes: tuple[SkeletonNode, ...]
    edges: tuple[SkeletonEdge, ...]
    bbox: tuple[int, int, int, int]  # inclusive (x0, y0, x1, y1) of the source mask
    source_dims: tuple[int, int]  # (width, height)

    def node(self, node_id: int) -> SkeletonNode:
        if not 0 <= node_id < len(self.nodes):
            raise UnknownNode(f"node {node_id} not in graph of {len(self.nodes)} nodes")
        return self.nodes[node_id]

    def degrees(self) -> list[int]:
        deg = [0] * len(self.nodes)
        for e in self.edges:
            deg[e.a] += 1
            deg[e.b] += 1
        return deg

    def bbox_diagonal(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return float(math.hypot(x1 - x0, y1 - y0))


def polyline_length(polyline) -> float:
    total = 0.0
    for (x0, y0), (x1, y1) in zip(polyline, polyline[1:]):
        total += math.hypot(x1 - x0, y1 - y0)
    return total


def build_graph(skel: SkeletonMask, source_bbox: tuple[int, int, int, int] | None = None) -> SkeletonGraph:
    """Convert a skeleton mask into a node/edge graph (pre-canonical ids).

    ``source_bbox`` should be the garment mask's bounding box; it anchors
    normalized coordinates. Defaults to the skeleton's own bbox.
    """
    bits = skel.bits
    if not bits.any():
        raise EmptySkeleton("skeleton has no pixels")
    h, w = bits.shape
    deg = neighbor_counts(bits)
    deg[~bits] = 0

    junction_px = bits & (deg >= 3)
    terminal_px = bits & (deg <= 1)

    nodes: list[SkeletonNode] = []
    node_at: dict[tuple[int, int], int] = {}  # (y, x) -> node id

    labels, n_clusters = ndimage.label(junction_px, structure=_CONN8)
    for lab in range(1, n_clusters + 1):
        pix = np.argwhere(labels == lab)  # row-major sorted (y, x)
        cy, cx = pix.mean(axis=0)
        d2 = (pix[:, 0] - cy) ** 2 + (pix[:, 1] - cx) ** 2
        py, px = pix[int(np.argmin(d2))]  # argmin takes first: smallest (y, x) on ties
        nid = len(nodes)
        nodes.append(
            SkeletonNode(
                id=nid, x=int(px), y=int(py), kind=JUNCTION,
                cluster=tuple((int(x), int(y)) for y, x in pix),
            )
        )
        for y, x in pix:
            node_at[(int(y), int(x))] = nid

    for y, x in np.argwhere(terminal_px):
        nid = len(nodes)
        nodes.append(SkeletonNode(id=nid, x=int(x), y=int(y), kind=ENDPOINT, cluster=(((int(x), int(y))),)))
        node_at[(int(y), int(x))] = nid

    edges: list[SkeletonEdge] = []
    claimed = np.zeros_like(bits)
    direct_links: set[tuple[int, int]] = set()

    def neighbors_of(y, x):
        for dy, dx in _NEIGHBORS:
            ny, nx = y + dy, x + dx
            if 0 <= ny < h and 0 <= nx < w and bits[ny, nx]:
                yield ny, nx

    def add_edge(a: int, b: int, interior: list[tuple[int, int]]):
        pa, pb = nodes[a].position, nodes[b].position
        poly = (pa, *((x, y) for y, x in interior), pb)
        edges.append(SkeletonEdge(a=a, b=b, polyline=poly, length=polyline_length(poly)))

    node_pixels = np.argwhere(bits & (deg != 2))
    for sy, sx in node_pixels:
        sy, sx = int(sy), int(sx)
        a = node_at[(sy, sx)]
        for ny, nx in neighbors_of(sy, sx):
            hit = node_at.get((ny, nx))
            if hit is not None:
                if hit == a:
                    continue  # internal cluster adjacency
                key = (min(a, hit), max(a, hit))
                if key not in direct_links:
                    direct_links.add(key)
                    add_edge(a, hit, [])
                continue
            if claimed[ny, nx]:
                continue
            # Trace the degree-2 chain until the next node pixel.
            chain = [(ny, nx)]
            claimed[ny, nx] = True
            prev, cur = (sy, sx), (ny, nx)
            while True:
                nxt = None
                for cand in neighbors_of(*cur):
                    if cand != prev:
                        nxt = cand
                        break
                if nxt is None:  # single chain pixel looping straight back
                    nxt = prev
                if nxt in node_at:
                    add_edge(a, node_at[nxt], chain)
                    break
                chain.append(nxt)
                claimed[nxt[0], nxt[1]] = True
                prev, cur = cur, nxt

    # Pure cycles: remaining unclaimed degree-2 pixels.
    leftover = bits & (deg == 2) & ~claimed
    # Exclude pixels already consumed as node clusters (deg==2 never is).
    cyc_labels, n_cycles = ndimage.label(leftover, structure=_CONN8)
    for lab in range(1, n_cycles + 1):
        pix = np.argwhere(cyc_labels == lab)
        ay, ax = (int(v) for v in pix[0])  # topmost-leftmost anchor
        nid = len(nodes)
        nodes.append(SkeletonNode(id=nid, x=ax, y=ay, kind=ENDPOINT, cluster=((ax, ay),)))
        nbrs = sorted(n for n in neighbors_of(ay, ax) if cyc_labels[n] == lab)
        loop = [(ay, ax)]
        prev, cur = (ay, ax), nbrs[0]
        while cur != (ay, ax):
            loop.append(cur)
            nxt = next(c for c in neighbors_of(*cur) if c != prev and cyc_labels[c] == lab)
            prev, cur = cur, nxt
        for y, x in loop[1:]:
            claimed[y, x] = True
        poly = tuple((x, y) for y, x in loop) + (((ax, ay)),)
        edges.append(SkeletonEdge(a=nid, b=nid, polyline=poly, length=polyline_length(poly)))

    if source_bbox is None:
        source_bbox = skel.bbox()
    return SkeletonGraph(
        nodes=tuple(nodes),
        edges=tuple(edges),
        bbox=tuple(int(v) for v in source_bbox),
        source_dims=(w, h),
    )


# ---------------------------------------------------------------------------
# Canonical indexing
# ---------------------------------------------------------------------------

def _normalized(node: SkeletonNode, bbox) -> tuple[float, float]:
    x0, y0, x1, y1 = bbox
    nx = (node.x - x0) / (x1 - x0) if x1 > x0 else 0.0
    ny = (node.y - y0) / (y1 - y0) if y1 > y0 else 0.0
    return nx, ny


def canonicalize(g: SkeletonGraph) -> SkeletonGraph:
    """Reindex nodes by (normalized y, normalized x, degree desc).

    The result is invariant to the input's node order, and the index
    assignment is stable across translated / uniformly scaled renders of
    the same silhouette.
    """
    deg = g.degrees()

    def key(node: SkeletonNode):
        nx, ny = _normalized(node, g.bbox)
        return (ny, nx, -deg[node.id])

    order = sorted(g.nodes, key=key)
    remap = {node.id: new_id for new_id, node in enumerate(order)}
    nodes = tuple(replace(node, id=i) for i, node in enumerate(order))

    new_edges = []
    for e in g.edges:
        a, b = remap[e.a], remap[e.b]
        poly = e.polyline
        if a > b:
            a, b = b, a
            poly = tuple(reversed(poly))
        elif a == b and len(poly) > 3:
            # Self-loop: fix traversal direction by the second pixel.
            if (poly[1][1], poly[1][0]) > (poly[-2][1], poly[-2][0]):
                poly = tuple(reversed(poly))
        new_edges.append(SkeletonEdge(a=a, b=b, polyline=poly, length=e.length))
    new_edges.sort(key=lambda e: (e.a, e.b, e.length, e.polyline))
    return SkeletonGraph(nodes=nodes, edges=tuple(new_edges), bbox=g.bbox, source_dims=g.source_dims)


def adjacency_matrix(g: SkeletonGraph) -> np.ndarray:
    """Symmetric 0/1 matrix over node ids; self-loops set the diagonal."""
    n = len(g.nodes)
    m = np.zeros((n, n), dtype=np.int_)
    for e in g.edges:
        m[e.a, e.b] = 1
        m[e.b, e.a] = 1
    return m


# ---------------------------------------------------------------------------
# Spur pruning
# ---------------------------------------------------------------------------

def default_spur_length(bbox_diagonal: float) -> float:
    return SPUR_LEN_AT_REF * bbox_diagonal / REF_BBOX_DIAGONAL


def _reanchor_loop(edge: SkeletonEdge, node: SkeletonNode) -> tuple[SkeletonEdge, SkeletonNode]:
    """Move a self-loop's anchor to the cycle's topmost-leftmost pixel."""
    cycle = list(edge.polyline[:-1])
    ax, ay = min(cycle, key=lambda p: (p[1], p[0]))
    idx = cycle.index((ax, ay))
    rotated = cycle[idx:] + cycle[:idx] + [(ax, ay)]
    if len(rotated) > 3 and (rotated[1][1], rotated[1][0]) > (rotated[-2][1], rotated[-2][0]):
        rotated = [rotated[0]] + list(reversed(rotated[1:-1])) + [rotated[0]]
    poly = tuple(rotated)
    new_node = replace(node, x=ax, y=ay, kind=ENDPOINT, cluster=((ax, ay),))
    return SkeletonEdge(a=node.id, b=node.id, polyline=poly, length=polyline_length(poly)), new_node


def prune_spurs(g: SkeletonGraph, min_len: float) -> SkeletonGraph:
    """Iteratively drop endpoint-terminated edges shorter than ``min_len``.

    Each sweep removes every current spur (an edge with exactly one
    degree-1 end), then dissolves junctions whose degree dropped to 2 by
    concatenating their two incident edges; repeats to a fixed point.
    Two-node components are never pruned away entirely.
    """
    if min_len <= 0:
        return g

    nodes: dict[int, SkeletonNode] = {n.id: n for n in g.nodes}
    edges: list[SkeletonEdge] = list(g.edges)

    def degrees() -> dict[int, int]:
        deg = {nid: 0 for nid in nodes}
        for e in edges:
            deg[e.a] += 1
            deg[e.b] += 1
        return deg

    while True:
        deg = degrees()
        spurs = [
            e for e in edges
            if e.a != e.b and e.length < min_len and (deg[e.a] == 1) != (deg[e.b] == 1)
        ]
        if not spurs:
            break
        for e in spurs:
            edges.remove(e)
            tip = e.a if deg[e.a] == 1 else e.b
            del nodes[tip]

        # Dissolve pass-through former junctions (new degree exactly 2).
        while True:
            deg = degrees()
            target = None
            for nid in sorted(nodes):
                if deg[nid] == 2 and nodes[nid].kind == JUNCTION:
                    target = nid
                    break
            if target is None:
                break
            incident = [e for e in edges if target in (e.a, e.b)]
            if len(incident) == 1:  # single self-loop: plain ring now
                new_edge, new_node = _reanchor_loop(incident[0], nodes[target])
                edges[edges.index(incident[0])] = new_edge
                nodes[target] = new_node
                continue
            e1, e2 = incident
            p1 = e1.polyline if e1.b == target else tuple(reversed(e1.polyline))
            far1 = e1.a if e1.b == target else e1.b
            p2 = e2.polyline if e2.a == target else tuple(reversed(e2.polyline))
            far2 = e2.b if e2.a == target else e2.a
            poly = p1 + p2[1:]
            edges.remove(e1)
            edges.remove(e2)
            edges.append(SkeletonEdge(a=far1, b=far2, polyline=poly, length=polyline_length(poly)))
            del nodes[target]

        deg = degrees()
        for nid, node in list(nodes.items()):
            if deg[nid] <= 1 and node.kind != ENDPOINT:
                nodes[nid] = replace(node, kind=ENDPOINT)

    remap = {old: new for new, old in enumerate(sorted(nodes))}
    out_nodes = tuple(replace(nodes[old], id=remap[old]) for old in sorted(nodes))
    out_edges = tuple(
        SkeletonEdge(a=remap[e.a], b=remap[e.b], polyline=e.polyline, length=e.length)
        for e in edges
    )
    return SkeletonGraph(nodes=out_nodes, edges=out_edges, bbox=g.bbox, source_dims=g.source_dims)


# ---------------------------------------------------------------------------
# Node relocation & pipeline
# ---------------------------------------------------------------------------

def move_node(g: SkeletonGraph, node_id: int, x: int, y: int, mask: BinaryMask) -> SkeletonGraph:
    """Relocate a node anywhere on the garment; topology is untouched."""
    node = g.node(node_id)
    if not mask.contains(x, y):
        raise OffGarment(f"({x}, {y}) is not on the garment")
    moved = replace(node, x=int(x), y=int(y), moved=True)
    nodes = tuple(moved if n.id == node_id else n for n in g.nodes)
    return SkeletonGraph(nodes=nodes, edges=g.edges, bbox=g.bbox, source_dims=g.source_dims)


def extract_graph(mask: BinaryMask, min_spur_len: float | None = None) -> SkeletonGraph:
    """Full representation extraction: thin, build, prune, canonicalize."""
    skel = thin(mask)
    g = build_graph(skel, source_bbox=mask.bbox())
    if min_spur_len is None:
        min_spur_len = default_spur_length(mask.bbox_diagonal())
    g = prune_spurs(g, min_spur_len)
    return canonicalize(g)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def graph_to_dict(g: SkeletonGraph) -> dict:
    return {
        "nodes": [
            {"id": n.id, "x": n.x, "y": n.y, "kind": n.kind, "moved": n.moved}
            for n in g.nodes
        ],
        "edges": [
            {"a": e.a, "b": e.b, "length": e.length, "polyline": [[x, y] for x, y in e.polyline]}
            for e in g.edges
        ],
        "bbox": list(g.bbox),
        "dims": list(g.source_dims),
    }


def graph_from_dict(doc: dict) -> SkeletonGraph:
    try:
        nodes = tuple(
            SkeletonNode(
                id=int(n["id"]), x=int(n["x"]), y=int(n["y"]),
                kind=str(n["kind"]), moved=bool(n["moved"]),
            )
            for n in doc["nodes"]
        )
        edges = tuple(
            SkeletonEdge(
                a=int(e["a"]), b=int(e["b"]),
                polyline=tuple((int(x), int(y)) for x, y in e["polyline"]),
                length=float(e["length"]),
            )
            for e in doc["edges"]
        )
        bbox = tuple(int(v) for v in doc["bbox"])
        dims = tuple(int(v) for v in doc["dims"])
        if len(bbox) != 4 or len(dims) != 2:
            raise ValueError("bad bbox/dims")
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"bad graph document: {exc}") from exc
    if sorted(n.id for n in nodes) != list(range(len(nodes))):
        raise MalformedDocument("node ids must be contiguous 0..n-1")
    return SkeletonGraph(nodes=nodes, edges=edges, bbox=bbox, source_dims=dims)


def graph_to_json(g: SkeletonGraph) -> str:
    return json.dumps(graph_to_dict(g), separators=(",", ":"))


def graph_from_json(text: str) -> SkeletonGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(str(exc)) from exc
    return graph_from_dict(doc)
