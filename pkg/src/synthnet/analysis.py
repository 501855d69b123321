"""Structural statistics and curve fits used to check generated networks."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph
from .growth import Event, GrowthParams, POP_EVENTS, replay

DEFAULT_KMIN = 3


class AnalysisError(ValueError):
    pass


class DisconnectedError(AnalysisError):
    def __init__(self, u: int, v: int):
        self.pair = (u, v)
        super().__init__(f"graph is disconnected: vertex {v} is unreachable from {u}")


def theoretical_exponent(params: GrowthParams) -> float:
    """Degree exponent ``1 + lam*Gamma(2-alpha) / (beta*Gamma(1-alpha))``."""
    a, b, lam = params.alpha, params.beta, params.lam
    if not 0 < a < 1 or b <= 0 or lam <= 0:
        raise AnalysisError("need 0 < alpha < 1, beta > 0, lambda > 0")
    return 1.0 + lam * math.exp(math.lgamma(2.0 - a) - math.lgamma(1.0 - a)) / b


def fit_power_law(degrees: Iterable[int], k_min: int = DEFAULT_KMIN, min_count: int = 30,
                  offset: float = 0.5) -> float:
    """Approximate discrete power-law MLE: ``1 + n / sum(ln(k / (k_min - offset)))``.

    The default half-unit offset is the usual discreteness correction.
    With ``offset=0`` this is the continuous estimator, which is exactly
    invariant under rescaling all degrees and ``k_min`` together.
    """
    ks = np.asarray([k for k in degrees if k >= k_min], dtype=float)
    if len(ks) < min_count:
        raise AnalysisError(f"only {len(ks)} degrees >= {k_min}; need at least {min_count}")
    if np.all(ks == ks[0]):
        raise AnalysisError("all qualifying degrees are equal; exponent is undetermined")
    return float(1.0 + len(ks) / np.sum(np.log(ks / (k_min - offset))))


def eccentricity(g: Graph, source: int) -> int:
    n = len(g)
    dist = [-1] * n
    dist[source] = 0
    queue = deque([source])
    reached = 1
    far = 0
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in g.neighbors(u):
            if dist[v] < 0:
                dist[v] = du
                far = du
                reached += 1
                queue.append(v)
    if reached != n:
        raise DisconnectedError(source, dist.index(-1))
    return far


def diameter(g: Graph) -> int:
    """Exact diameter by a breadth-first search from every vertex."""
    if len(g) == 0:
        raise AnalysisError("empty graph has no diameter")
    return max(eccentricity(g, s) for s in range(len(g)))


@dataclass(frozen=True)
class ExponentialFit:
    a: float
    b: float
    r2: float  # nan when the data has no spread in log space


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r2: float


def fit_linear(xs: Sequence[float], ys: Sequence[float]) -> LinearFit:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise AnalysisError("xs and ys must be 1-d sequences of equal length")
    if len(np.unique(x)) < 2:
        raise AnalysisError("need at least two distinct x values")
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    slope = float(np.dot(dx, dy) / np.dot(dx, dx))
    intercept = float(ym - slope * xm)
    ss_tot = float(np.dot(dy, dy))
    resid = y - (slope * x + intercept)
    r2 = 1.0 - float(np.dot(resid, resid)) / ss_tot if ss_tot > 0 else math.nan
    if len(x) == 2 and ss_tot > 0:
        r2 = 1.0
    return LinearFit(slope, intercept, r2)


def fit_exponential(xs: Sequence[float], ys: Sequence[float]) -> ExponentialFit:
    """Least-squares fit of ``y = a*exp(b*x)`` on ``(x, ln y)``."""
    y = np.asarray(ys, dtype=float)
    if len(y) < 3:
        raise AnalysisError("need at least three points")
    if np.any(y <= 0):
        raise AnalysisError("exponential fit needs strictly positive values")
    line = fit_linear(xs, np.log(y))
    return ExponentialFit(math.exp(line.intercept), line.slope, line.r2)


def fit_trace(trace) -> ExponentialFit:
    """Exponential fit of a convergence trace against the iteration index."""
    return fit_exponential(trace.iterations_array(), trace.values_array())


@dataclass(frozen=True)
class Checkpoint:
    iteration: int
    t: float
    nodes: int
    edges: int
    avg_degree: float
    diameter: int


def densification_report(events: list[Event], iterations: Sequence[int]) -> list[Checkpoint]:
    """Statistics of the replayed graph after each listed iteration count."""
    if len(iterations) < 2:
        raise AnalysisError("need at least two checkpoints")
    clock_at = [0.0]
    for ev in events:
        if ev.kind in POP_EVENTS:
            clock_at.append(ev.t)
    rows = []
    for it in sorted(iterations):
        g = replay(events, it)
        n, m = len(g), g.number_of_edges()
        rows.append(Checkpoint(
            iteration=it,
            t=clock_at[min(it, len(clock_at) - 1)],
            nodes=n,
            edges=m,
            avg_degree=2.0 * m / n if n else 0.0,
            diameter=diameter(g),
        ))
    return rows


def quarter_checkpoints(total_iterations: int, parts: int = 4) -> list[int]:
    return [total_iterations * q // parts for q in range(0, parts + 1)]
