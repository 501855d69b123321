"""Breadth-first subgraph sampling.

Vertices are collected level by level from a seed. Within each level the
order is shuffled, so when the size budget runs out mid-level the kept
vertices are a random subset of that level. The sample is the subgraph
induced by the collected vertices. No claim is made that statistics of the
sample are unbiased estimates of the full network.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .graph import EndorsementSet, Graph, UnknownVertexError
from .patterns import compute_pattern_matrix


@dataclass(frozen=True)
class SampleSpec:
    target_size: int
    seed_vertex: int | None = None  # None: drawn at random
    seed: int | None = None

    def __post_init__(self):
        if self.target_size < 1:
            raise ValueError("target_size must be at least 1")


@dataclass
class Sample:
    graph: Graph
    endorsements: EndorsementSet | None
    vertices: list[int]  # sample id -> original id
    seed_vertex: int


def bfs_order(g: Graph, start: int, limit: int, rng: random.Random) -> list[int]:
    if start not in g:
        raise UnknownVertexError(f"unknown seed vertex {start!r}")
    seen = {start}
    order = [start]
    level = [start]
    while level and len(order) < limit:
        nxt = []
        for u in level:
            for v in sorted(g.neighbors(u)):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        rng.shuffle(nxt)
        order.extend(nxt[: limit - len(order)])
        level = nxt
    return order


def bfs_sample(g: Graph, d: EndorsementSet | None, spec: SampleSpec) -> Sample:
    if len(g) == 0:
        raise ValueError("cannot sample an empty graph")
    rng = random.Random(spec.seed)
    start = spec.seed_vertex if spec.seed_vertex is not None else rng.randrange(len(g))
    order = bfs_order(g, start, spec.target_size, rng)
    sub, mapping = g.induced_subgraph(order)
    sub_d = d.restrict(sub, mapping) if d is not None else None
    return Sample(sub, sub_d, mapping, start)


def estimate_pattern(sample: Sample) -> np.ndarray:
    """Pattern matrix of the sample, an estimate for the sampled network."""
    if sample.endorsements is None:
        raise ValueError("sample carries no endorsements")
    return compute_pattern_matrix(sample.graph, sample.endorsements)
