"""Reduction from set-intersection pattern recognition to pattern replication.

Given a symmetric nonnegative integer matrix ``P`` (``P[i][j]`` is the
required ``|S_i ∩ S_j|``), build a base graph and a target pattern matrix
that is realizable on that graph exactly when ``P`` is an intersection
pattern. The graph is the complete graph on ``tr(P)`` vertices.
"""

from __future__ import annotations

from fractions import Fraction

from .graph import Graph


class InstanceError(ValueError):
    pass


def validate_rip(p) -> list[list[int]]:
    rows = [list(r) for r in p]
    n = len(rows)
    if n == 0:
        raise InstanceError("empty intersection matrix")
    out = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise InstanceError(f"row {i} has {len(row)} entries, expected {n}")
        conv = []
        for j, x in enumerate(row):
            if isinstance(x, bool) or int(x) != x:
                raise InstanceError(f"entry ({i}, {j}) = {x!r} is not an integer")
            if x < 0:
                raise InstanceError(f"entry ({i}, {j}) = {x} is negative")
            conv.append(int(x))
        out.append(conv)
    for i in range(n):
        for j in range(i + 1, n):
            if out[i][j] != out[j][i]:
                raise InstanceError(f"matrix is not symmetric at ({i}, {j})")
    for i in range(n):
        if out[i][i] == 0:
            raise InstanceError(f"diagonal entry {i} is zero; ratios p_ij/p_ii are undefined")
    return out


def unrealizable_pairs(p) -> list[tuple[int, int]]:
    """Pairs with ``p_ij > min(p_ii, p_jj)``, which no family of sets can meet."""
    n = len(p)
    return [(i, j) for i in range(n) for j in range(i + 1, n)
            if p[i][j] > min(p[i][i], p[j][j])]


def rip_to_rep(p) -> tuple[Graph, list[list[Fraction]]]:
    """Return ``(K_tr(P), M)`` with ``m_ii = p_ii/tr(P)`` and ``m_ij = p_ij/p_ii``."""
    p = validate_rip(p)
    n = len(p)
    order = sum(p[i][i] for i in range(n))
    m = [[Fraction(p[i][i], order) if i == j else Fraction(p[i][j], p[i][i])
          for j in range(n)] for i in range(n)]
    return Graph.complete(order), m
