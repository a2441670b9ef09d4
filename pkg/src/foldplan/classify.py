"""Structural graph descriptors plus KNN voting over garment classes.

The descriptor is scale- and translation-invariant by construction: node
positions are bbox-normalized and edge lengths divide by the bbox
diagonal. Classification is a majority vote among the k nearest library
descriptors under Euclidean distance on a fixed-width vector; ties break
by summed inverse distance, then lexicographic class order.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass

import numpy as np

from .errors import EmptyLibrary, MalformedDocument
from .graph import ENDPOINT, JUNCTION, SkeletonGraph

POSITION_SLOTS = 12
_MAX_DEGREE = 6


@dataclass(frozen=True)
class GraphDescriptor:
    node_count: int
    endpoint_count: int
    junction_count: int
    degree_histogram: tuple[int, ...]  # degrees 1..6, clamped
    positions: tuple[tuple[float, float], ...]  # canonical order, bbox-relative
    edge_length_quantiles: tuple[float, float, float]  # min, median, max / diagonal

    def vector(self) -> np.ndarray:
        """Fixed-width embedding; positions truncated or zero-padded to 12 slots."""
        slots = list(self.positions[:POSITION_SLOTS])
        slots += [(0.0, 0.0)] * (POSITION_SLOTS - len(slots))
        flat = [c for xy in slots for c in xy]
        return np.array(
            [
                float(self.node_count),
                float(self.endpoint_count),
                float(self.junction_count),
                *[float(v) for v in self.degree_histogram],
                *flat,
                *self.edge_length_quantiles,
            ],
            dtype=float,
        )

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "endpoint_count": self.endpoint_count,
            "junction_count": self.junction_count,
            "degree_histogram": list(self.degree_histogram),
            "positions": [[x, y] for x, y in self.positions],
            "edge_length_quantiles": list(self.edge_length_quantiles),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GraphDescriptor":
        try:
            return cls(
                node_count=int(doc["node_count"]),
                endpoint_count=int(doc["endpoint_count"]),
                junction_count=int(doc["junction_count"]),
                degree_histogram=tuple(int(v) for v in doc["degree_histogram"]),
                positions=tuple((float(x), float(y)) for x, y in doc["positions"]),
                edge_length_quantiles=tuple(float(v) for v in doc["edge_length_quantiles"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedDocument(f"bad descriptor: {exc}") from exc


def descriptor(g: SkeletonGraph) -> GraphDescriptor:
    degrees = g.degrees()
    hist = [0] * _MAX_DEGREE
    for d in degrees:
        hist[min(max(d, 1), _MAX_DEGREE) - 1] += 1

    x0, y0, x1, y1 = g.bbox
    sx = (x1 - x0) or 1
    sy = (y1 - y0) or 1
    positions = tuple(((n.x - x0) / sx, (n.y - y0) / sy) for n in g.nodes)

    diag = g.bbox_diagonal() or 1.0
    lengths = sorted(e.length / diag for e in g.edges)
    if lengths:
        quantiles = (lengths[0], statistics.median(lengths), lengths[-1])
    else:
        quantiles = (0.0, 0.0, 0.0)

    return GraphDescriptor(
        node_count=len(g.nodes),
        endpoint_count=sum(1 for n in g.nodes if n.kind == ENDPOINT),
        junction_count=sum(1 for n in g.nodes if n.kind == JUNCTION),
        degree_histogram=tuple(hist),
        positions=positions,
        edge_length_quantiles=quantiles,
    )


@dataclass(frozen=True)
class DescriptorLibrary:
    entries: tuple[tuple[GraphDescriptor, str], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def labels(self) -> list[str]:
        return sorted({label for _, label in self.entries})


def save_library(lib: DescriptorLibrary, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for desc, label in lib.entries:
            f.write(json.dumps({"label": label, "descriptor": desc.to_dict()}, separators=(",", ":")))
            f.write("\n")


def load_library(path) -> DescriptorLibrary:
    entries = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
                label = str(doc["label"])
                desc = GraphDescriptor.from_dict(doc["descriptor"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise MalformedDocument(f"{path}:{lineno}: {exc}") from exc
            entries.append((desc, label))
    return DescriptorLibrary(entries=tuple(entries))


@dataclass(frozen=True)
class Vote:
    label: str
    votes: int
    inverse_distance: float


def knn_classify(
    d: GraphDescriptor, lib: DescriptorLibrary, k: int = 5
) -> tuple[str, list[Vote]]:
    """Majority label among the k nearest entries, with the full tally."""
    if len(lib) == 0:
        raise EmptyLibrary("descriptor library is empty")
    if not 1 <= k <= len(lib):
        raise ValueError(f"k must be in [1, {len(lib)}], got {k}")

    query = d.vector()
    vectors = np.stack([desc.vector() for desc, _ in lib.entries])
    dists = np.sqrt(((vectors - query) ** 2).sum(axis=1))
    # Stable nearest-k: distance, then library order.
    order = np.argsort(dists, kind="stable")[:k]

    tally: dict[str, Vote] = {}
    for idx in order:
        label = lib.entries[int(idx)][1]
        dist = float(dists[idx])
        inv = float("inf") if dist == 0.0 else 1.0 / dist
        prev = tally.get(label)
        if prev is None:
            tally[label] = Vote(label=label, votes=1, inverse_distance=inv)
        else:
            tally[label] = Vote(
                label=label, votes=prev.votes + 1, inverse_distance=prev.inverse_distance + inv
            )

    ranked = sorted(
        tally.values(), key=lambda v: (-v.votes, -v.inverse_distance, v.label)
    )
    return ranked[0].label, ranked


def leave_one_out_accuracy(lib: DescriptorLibrary, k: int = 5) -> float:
    """Fraction of entries whose class is recovered from the others."""
    if len(lib) < 2:
        raise EmptyLibrary("need at least two entries for leave-one-out")
    hits = 0
    for i, (desc, label) in enumerate(lib.entries):
        rest = DescriptorLibrary(entries=lib.entries[:i] + lib.entries[i + 1 :])
        predicted, _ = knn_classify(desc, rest, k=min(k, len(rest)))
        hits += predicted == label
    return hits / len(lib.entries)


def shuffled_label_control(lib: DescriptorLibrary, k: int = 5, seed: int = 0) -> float:
    """Leave-one-out accuracy after randomly permuting the labels."""
    rng = np.random.default_rng(seed)
    labels = [label for _, label in lib.entries]
    perm = rng.permutation(len(labels))
    shuffled = DescriptorLibrary(
        entries=tuple(
            (desc, labels[int(perm[i])]) for i, (desc, _) in enumerate(lib.entries)
        )
    )
    return leave_one_out_accuracy(shuffled, k=k)
