"""Shared builders for tests."""

import random

from synthnet.graph import EndorsementSet, Graph


def random_endorsements(g: Graph, n_s: int, rng: random.Random, low=0.35, high=0.65):
    """Per skill, keep each edge with a skill-specific probability drawn
    from ``(low, high)``, oriented at random."""
    d = EndorsementSet(g, n_s)
    for k in range(n_s):
        p = rng.uniform(low, high)
        for u, v in g.edges():
            if rng.random() < p:
                if rng.random() < 0.5:
                    u, v = v, u
                d.add_arc(k, u, v)
    return d


def brute_force_pattern(n: int, d: EndorsementSet):
    """Pattern matrix straight from the definitions, in exact fractions."""
    from fractions import Fraction

    k = d.skill_count
    endorsed = [{v for v in range(n) if any(d.has_arc(s, u, v) for u in range(n))}
                for s in range(k)]
    m = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            if i == j:
                m[i][j] = Fraction(len(endorsed[i]), n)
            elif endorsed[i]:
                m[i][j] = Fraction(len(endorsed[i] & endorsed[j]), len(endorsed[i]))
    return m


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                                if rng.random() < p])
