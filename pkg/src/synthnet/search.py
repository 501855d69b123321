"""Heuristic construction of endorsement digraphs matching a target pattern.

The configuration is built by an initializer (random fill or greedy
placement) and refined by a first-improvement local search that toggles
single arcs. Only membership changes of a vertex in a skill's endorsed set
move the pattern matrix, and such a change touches one row and part of one
column, so each candidate move is scored in O(n_s).
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .graph import EndorsementSet, Graph
from .patterns import compute_pattern_matrix, delta, validate_pattern, validate_weights

DEFAULT_THRESHOLD = 1e-5
DEFAULT_STALL = 500
DEFAULT_MAX_ITERATIONS = 10**6
GREEDY_STALL = 50
DEFAULT_RESTARTS = 99

THRESHOLD_REACHED = "threshold-reached"
STALLED = "stalled"
BUDGET_EXHAUSTED = "budget-exhausted"

# improvements smaller than this are rounding noise
_EPS = 1e-15


def _as_rng(rng) -> random.Random:
    if isinstance(rng, random.Random):
        return rng
    return random.Random(rng)


@dataclass
class ConvergenceTrace:
    """Objective value after every accepted move, starting at iteration 0."""

    points: list[tuple[int, float]] = field(default_factory=list)
    status: str = ""
    iterations: int = 0

    @property
    def final_delta(self) -> float:
        return self.points[-1][1]

    @property
    def accepted(self) -> int:
        return len(self.points) - 1

    def iterations_array(self) -> np.ndarray:
        return np.array([p[0] for p in self.points], dtype=float)

    def values_array(self) -> np.ndarray:
        return np.array([p[1] for p in self.points], dtype=float)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("iter", "delta"))
        for it, value in self.points:
            w.writerow((it, repr(value)))
        return buf.getvalue()


class _PatternState:
    """Arc sets, endorsed-set counts and the current weighted error.

    ``total`` is the weighted squared Frobenius error (rho); delta is
    ``total / n_s**2``.
    """

    def __init__(self, g: Graph, target: np.ndarray, weights: np.ndarray,
                 init: EndorsementSet | None = None):
        n = len(g)
        k = target.shape[0]
        self.g = g
        self.n = n
        self.k = k
        self.target = target.tolist()
        self.w2 = (weights * weights).tolist()
        self.indeg = [[0] * n for _ in range(k)]
        self.arcs: list[list[int]] = [[] for _ in range(k)]
        self.pos: list[dict[int, int]] = [{} for _ in range(k)]
        self.size = [0] * k
        self.inter = [[0] * k for _ in range(k)]
        if init is not None:
            if init.skill_count != k:
                raise ValueError(f"initial configuration has {init.skill_count} skills, "
                                 f"target has {k}")
            for s in range(k):
                for u, v in init.sorted_arcs(s):
                    self._add_arc(s, u * n + v)
        self._rebuild_matrix()

    # -- bookkeeping -------------------------------------------------------

    def _add_arc(self, i: int, code: int) -> None:
        v = code % self.n
        self.pos[i][code] = len(self.arcs[i])
        self.arcs[i].append(code)
        self.indeg[i][v] += 1
        if self.indeg[i][v] == 1:
            self._set_membership(i, v, 1)

    def _remove_arc(self, i: int, code: int) -> None:
        v = code % self.n
        arcs, pos = self.arcs[i], self.pos[i]
        idx = pos.pop(code)
        last = arcs.pop()
        if last != code:
            arcs[idx] = last
            pos[last] = idx
        self.indeg[i][v] -= 1
        if self.indeg[i][v] == 0:
            self._set_membership(i, v, -1)

    def _set_membership(self, i: int, v: int, sign: int) -> None:
        self.size[i] += sign
        self.inter[i][i] = self.size[i]
        indeg = self.indeg
        for j in range(self.k):
            if j != i and indeg[j][v] > 0:
                self.inter[i][j] += sign
                self.inter[j][i] += sign

    def _rebuild_matrix(self) -> None:
        k, n = self.k, self.n
        m = [[0.0] * k for _ in range(k)]
        for i in range(k):
            c = self.size[i]
            row = self.inter[i]
            for j in range(k):
                if i == j:
                    m[i][j] = c / n
                elif c > 0:
                    m[i][j] = row[j] / c
        self.m = m
        self.err = [[self.w2[i][j] * (self.target[i][j] - m[i][j]) ** 2 for j in range(k)]
                    for i in range(k)]
        self.total = math.fsum(x for row in self.err for x in row)

    # -- scoring -----------------------------------------------------------

    def membership_gain(self, i: int, v: int, sign: int) -> float:
        """Change of ``total`` if ``v`` joins (+1) or leaves (-1) skill ``i``."""
        k = self.k
        indeg = self.indeg
        target, w2, err = self.target, self.w2, self.err
        ti, wi, ei = target[i], w2[i], err[i]
        c = self.size[i] + sign
        row = self.inter[i]
        size = self.size
        d = ti[i] - c / self.n
        diff = wi[i] * d * d - ei[i]
        for j in range(k):
            if j == i:
                continue
            if indeg[j][v] > 0:
                x = row[j] + sign
                # column entry (j, i): |E_j ∩ E_i| changes, |E_j| does not
                dj = target[j][i] - x / size[j]
                diff += w2[j][i] * dj * dj - err[j][i]
            else:
                x = row[j]
            d = ti[j] - (x / c if c > 0 else 0.0)
            diff += wi[j] * d * d - ei[j]
        return diff

    def _commit_membership(self, i: int) -> None:
        """Refresh row ``i`` and column ``i`` of the matrix and the error."""
        k, n = self.k, self.n
        m, err, target, w2 = self.m, self.err, self.target, self.w2
        c = self.size[i]
        row = self.inter[i]
        for j in range(k):
            if j == i:
                val = c / n
            else:
                val = row[j] / c if c > 0 else 0.0
                cj = self.size[j]
                colval = self.inter[j][i] / cj if cj > 0 else 0.0
                m[j][i] = colval
                err[j][i] = w2[j][i] * (target[j][i] - colval) ** 2
            m[i][j] = val
            err[i][j] = w2[i][j] * (target[i][j] - val) ** 2
        self.total = math.fsum(x for r in err for x in r)

    def insert(self, i: int, code: int) -> None:
        v = code % self.n
        joined = self.indeg[i][v] == 0
        self._add_arc(i, code)
        if joined:
            self._commit_membership(i)

    def delete(self, i: int, code: int) -> None:
        v = code % self.n
        left = self.indeg[i][v] == 1
        self._remove_arc(i, code)
        if left:
            self._commit_membership(i)

    @property
    def delta(self) -> float:
        return self.total / (self.k * self.k)

    def to_endorsements(self) -> EndorsementSet:
        d = EndorsementSet(self.g, self.k)
        n = self.n
        for s in range(self.k):
            for code in sorted(self.arcs[s]):
                d.add_arc(s, code // n, code % n)
        return d


def _check_inputs(g: Graph, target, weights=None):
    target = validate_pattern(target)
    if len(g) == 0:
        raise ValueError("base graph has no vertices")
    if weights is None:
        return target, None
    weights = validate_weights(weights)
    if weights.shape != target.shape:
        raise ValueError(f"weights shape {weights.shape} does not match target {target.shape}")
    return target, weights


def random_init(g: Graph, target, rng=None) -> EndorsementSet:
    """Fill each digraph with randomly oriented base edges.

    Arcs are drawn in random order without replacement from both
    orientations of every edge, and added to skill ``i`` until the endorsed
    fraction first reaches the target diagonal entry.
    """
    target, _ = _check_inputs(g, target)
    rng = _as_rng(rng)
    n = len(g)
    k = target.shape[0]
    edges = g.edge_list()
    d = EndorsementSet(g, k)
    for i in range(k):
        goal = target[i, i]
        if goal <= 0:
            continue
        supply = [(u, v) for u, v in edges] + [(v, u) for u, v in edges]
        rng.shuffle(supply)
        endorsed: set[int] = set()
        for u, v in supply:
            d.add_arc(i, u, v)
            endorsed.add(v)
            if len(endorsed) / n >= goal:
                break
    return d


def greedy_init(g: Graph, target, weights, rng=None,
                threshold: float = DEFAULT_THRESHOLD, stall: int = GREEDY_STALL) -> EndorsementSet:
    """Place arcs one random edge at a time where they reduce rho the most.

    For each drawn edge, every (orientation, skill) placement and the option
    of doing nothing are compared; the best strict improvement is committed.
    Stops when delta reaches ``threshold`` or after ``stall`` consecutive
    draws without an improvement.
    """
    target, weights = _check_inputs(g, target, weights)
    rng = _as_rng(rng)
    state = _PatternState(g, target, weights)
    edges = g.edge_list()
    if not edges:
        return state.to_endorsements()
    n, k = state.n, state.k
    goal = threshold * k * k
    indeg, pos = state.indeg, state.pos
    fails = 0
    while state.total > goal and fails < stall:
        a, b = edges[rng.randrange(len(edges))]
        best, best_move = -_EPS, None
        for i in range(k):
            for u, v in ((a, b), (b, a)):
                # an arc onto an already endorsed vertex cannot change M
                if indeg[i][v] > 0 or (u * n + v) in pos[i]:
                    continue
                gain = state.membership_gain(i, v, 1)
                if gain < best:
                    best, best_move = gain, (i, u * n + v)
        if best_move is None:
            fails += 1
        else:
            state.insert(*best_move)
            fails = 0
    return state.to_endorsements()


def local_search(g: Graph, target, weights, init: EndorsementSet, rng=None,
                 threshold: float = DEFAULT_THRESHOLD, stall: int = DEFAULT_STALL,
                 max_iterations: int = DEFAULT_MAX_ITERATIONS,
                 ) -> tuple[EndorsementSet, ConvergenceTrace]:
    """Refine ``init`` by random single-arc insertions and deletions.

    Each iteration picks a skill and an action uniformly. *Insert* draws a
    base edge and an orientation and adds the arc if it is new and strictly
    lowers delta; *Delete* draws an arc of the skill and removes it if that
    strictly lowers delta. Stops at ``threshold``, after ``stall``
    consecutive non-improving iterations, or after ``max_iterations``.
    """
    target, weights = _check_inputs(g, target, weights)
    if init.base is not g and init.base != g:
        raise ValueError("initial configuration belongs to a different graph")
    rng = _as_rng(rng)
    state = _PatternState(g, target, weights, init)
    trace = ConvergenceTrace([(0, state.delta)])
    edges = [(u, v) for u, v in g.edge_list()]
    n, k = state.n, state.k
    goal = threshold * k * k
    indeg, pos, arcs = state.indeg, state.pos, state.arcs
    gain = state.membership_gain
    randrange, random_ = rng.randrange, rng.random
    n_edges = len(edges)

    it = fails = 0
    while True:
        if state.total <= goal:
            trace.status = THRESHOLD_REACHED
            break
        if fails >= stall:
            trace.status = STALLED
            break
        if it >= max_iterations:
            trace.status = BUDGET_EXHAUSTED
            break
        it += 1
        i = randrange(k)
        if random_() < 0.5:
            if not n_edges:
                fails += 1
                continue
            u, v = edges[randrange(n_edges)]
            if random_() < 0.5:
                u, v = v, u
            code = u * n + v
            if code in pos[i] or indeg[i][v] > 0 or gain(i, v, 1) >= -_EPS:
                fails += 1
                continue
            state.insert(i, code)
        else:
            arcs_i = arcs[i]
            if not arcs_i:
                fails += 1
                continue
            code = arcs_i[randrange(len(arcs_i))]
            v = code % n
            if indeg[i][v] > 1 or gain(i, v, -1) >= -_EPS:
                fails += 1
                continue
            state.delete(i, code)
        fails = 0
        trace.points.append((it, state.delta))

    trace.iterations = it
    return state.to_endorsements(), trace


def solve(g: Graph, target, weights, seed=None, init: str = "greedy", restarts: int = DEFAULT_RESTARTS,
          threshold: float = DEFAULT_THRESHOLD, stall: int = DEFAULT_STALL,
          max_iterations: int = DEFAULT_MAX_ITERATIONS) -> tuple[EndorsementSet, ConvergenceTrace]:
    """Initializer plus local search, repeated up to ``restarts`` more times.

    Every run gets its own seed drawn from ``seed``; the run with the lowest
    final delta is returned (earliest run on ties). Restarts stop as soon as
    a run reaches the threshold.
    """
    if init not in ("greedy", "random"):
        raise ValueError(f"unknown initializer {init!r}")
    if restarts < 0:
        raise ValueError("restarts must be nonnegative")
    master = _as_rng(seed)
    best = None
    for _ in range(restarts + 1):
        rng = random.Random(master.getrandbits(64))
        if init == "greedy":
            start = greedy_init(g, target, weights, rng, threshold=threshold)
        else:
            start = random_init(g, target, rng)
        result = local_search(g, target, weights, start, rng, threshold=threshold,
                              stall=stall, max_iterations=max_iterations)
        if best is None or result[1].final_delta < best[1].final_delta:
            best = result
        if best[1].status == THRESHOLD_REACHED:
            break
    return best


def audit_delta(g: Graph, d: EndorsementSet, target, weights) -> float:
    """Delta recomputed from scratch on a materialized configuration."""
    return delta(target, compute_pattern_matrix(g, d), weights)
