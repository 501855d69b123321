"""Endorsement pattern matrices and the weighted distances between them.

A pattern matrix ``M`` over ``n_s`` skills holds on its diagonal the
fraction of vertices endorsed for each skill and off the diagonal the
ratio ``|endorsed for i and j| / |endorsed for i|`` (0 when nobody is
endorsed for ``i``). A vertex is endorsed for a skill when its in-degree
in that skill's digraph is positive.
"""

from __future__ import annotations

import csv
import io

import numpy as np

from .graph import EndorsementSet, Graph

DEFAULT_DIAGONAL_WEIGHT = 7.0
DEFAULT_OFF_DIAGONAL_WEIGHT = 1.0


class PatternError(ValueError):
    pass


def pattern_from_counts(n_vertices: int, intersections) -> np.ndarray:
    """Pattern matrix from ``intersections[i][j] = |E_i ∩ E_j|``.

    The diagonal of ``intersections`` holds the endorsed-set sizes.
    """
    x = np.asarray(intersections, dtype=float)
    k = x.shape[0]
    sizes = np.diag(x).copy()
    m = np.zeros((k, k))
    nz = sizes > 0
    m[nz, :] = x[nz, :] / sizes[nz, None]
    np.fill_diagonal(m, sizes / n_vertices)
    return m


def endorsement_counts(d: EndorsementSet) -> np.ndarray:
    """Matrix of endorsed-set intersection sizes (sizes on the diagonal)."""
    k = d.skill_count
    member = np.zeros((k, len(d.base)), dtype=np.int64)
    for s in range(k):
        for _, v in d.arcs(s):
            member[s, v] = 1
    return member @ member.T


def compute_pattern_matrix(g: Graph, d: EndorsementSet) -> np.ndarray:
    if len(g) == 0:
        raise PatternError("pattern matrix needs at least one vertex")
    return pattern_from_counts(len(g), endorsement_counts(d))


def default_weights(n_s: int, diagonal: float = DEFAULT_DIAGONAL_WEIGHT,
                    off_diagonal: float = DEFAULT_OFF_DIAGONAL_WEIGHT) -> np.ndarray:
    w = np.full((n_s, n_s), float(off_diagonal))
    np.fill_diagonal(w, float(diagonal))
    return validate_weights(w)


def validate_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise PatternError(f"weight matrix must be square, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise PatternError("weights must be finite and strictly positive")
    return w


def validate_pattern(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise PatternError(f"pattern matrix must be square and nonempty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise PatternError("pattern matrix has non-finite entries")
    if np.any(m < 0):
        raise PatternError("pattern matrix entries must be nonnegative")
    return m


def sanity_violations(m) -> list[tuple[int, int]]:
    """Entries that no endorsement configuration can produce.

    Diagonal entries are fractions of the vertex set and off-diagonal
    entries are ratios of a subset to a set, so both must be at most 1.
    """
    m = np.asarray(m, dtype=float)
    return [(int(i), int(j)) for i, j in zip(*np.nonzero(m > 1))]


def rho(m, m2, w) -> float:
    """Squared Frobenius norm of ``w ∘ (m - m2)``."""
    m = np.asarray(m, dtype=float)
    m2 = np.asarray(m2, dtype=float)
    w = np.asarray(w, dtype=float)
    if m.shape != m2.shape or m.shape != w.shape or m.ndim != 2:
        raise PatternError(f"shape mismatch: {m.shape}, {m2.shape}, weights {w.shape}")
    diff = w * (m - m2)
    return float(np.sum(diff * diff))


def delta(m, m2, w) -> float:
    """``rho`` normalised by the number of matrix entries."""
    n_s = np.shape(m)[0]
    return rho(m, m2, w) / (n_s * n_s)


def format_matrix_csv(m) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(m, dtype=float):
        writer.writerow(repr(float(x)) for x in row)
    return buf.getvalue()


def parse_matrix_csv(text: str) -> np.ndarray:
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            rows.append([float(c) for c in row])
        except ValueError:
            raise PatternError(f"line {lineno}: non-numeric entry in {row!r}") from None
    if not rows:
        raise PatternError("empty matrix file")
    if any(len(r) != len(rows) for r in rows):
        raise PatternError(f"matrix must be square: {len(rows)} rows with lengths "
                           f"{sorted({len(r) for r in rows})}")
    return np.array(rows)
