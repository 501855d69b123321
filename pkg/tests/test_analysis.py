import math
import random

import numpy as np
import pytest

from synthnet.analysis import (AnalysisError, DisconnectedError, densification_report, diameter,
                               fit_exponential, fit_linear, fit_power_law, fit_trace,
                               quarter_checkpoints, theoretical_exponent)
from synthnet.graph import Graph
from synthnet.growth import ArrivalFunction, GrowthParams, TerminationSpec, generate_base, preset
from synthnet.search import ConvergenceTrace

from helpers import random_graph

# 1 + lam*Gamma(2-a)/(beta*Gamma(1-a)) evaluated with mpmath at 30 digits
EXPONENT_ORACLE = {"linkedin": 2.1, "flickr": 1.736, "delicious": 2.3, "answers": 1.075}


@pytest.mark.parametrize("name", sorted(EXPONENT_ORACLE))
def test_theoretical_exponent_matches_oracle(name):
    assert theoretical_exponent(preset(name)) == pytest.approx(EXPONENT_ORACLE[name], abs=1e-9)


def test_theoretical_exponent_against_mpmath():
    mpmath = pytest.importorskip("mpmath")
    p = preset("flickr")
    ref = 1 + p.lam * mpmath.gamma(2 - p.alpha) / (p.beta * mpmath.gamma(1 - p.alpha))
    assert theoretical_exponent(p) == pytest.approx(float(ref), abs=1e-12)


def _gamma_quadrature(s, points=10**4):
    # substituting t = u**m gives m * u**3 * exp(-u**m), smooth at the origin
    from scipy.integrate import simpson

    m = 4.0 / s
    u = np.linspace(0.0, 60.0 ** (1 / m), points + 1)
    return simpson(m * u**3 * np.exp(-u**m), x=u)


@pytest.mark.parametrize("name", sorted(EXPONENT_ORACLE))
def test_theoretical_exponent_matches_quadrature(name):
    p = preset(name)
    ref = 1 + p.lam * _gamma_quadrature(2 - p.alpha) / (p.beta * _gamma_quadrature(1 - p.alpha))
    assert theoretical_exponent(p) == pytest.approx(ref, abs=1e-8)


def test_small_alpha_limit():
    p = GrowthParams(ArrivalFunction.polynomial(1.0), 1e-9, 0.5, 0.25)
    assert theoretical_exponent(p) == pytest.approx(1 + 0.25 / 0.5, abs=1e-8)


def _discrete_power_law(alpha, k_min, size, rng):
    # inverse transform on the continuous approximation, rounded to integers,
    # which is the model the half-offset estimator assumes
    u = rng.random(size)
    return np.floor((k_min - 0.5) * (1 - u) ** (-1 / (alpha - 1)) + 0.5).astype(int)


def test_power_law_recovery():
    ks = _discrete_power_law(2.5, 5, 10**5, np.random.default_rng(0))
    assert fit_power_law(ks, k_min=5) == pytest.approx(2.5, abs=0.05)


def test_power_law_degenerate_inputs():
    with pytest.raises(AnalysisError):
        fit_power_law([4] * 100)
    with pytest.raises(AnalysisError):
        fit_power_law([3, 4, 5])


def test_continuous_estimator_is_scale_free():
    ks = _discrete_power_law(2.2, 3, 5000, np.random.default_rng(1))
    a = fit_power_law(ks, k_min=3, offset=0.0)
    b = fit_power_law(2 * ks, k_min=6, offset=0.0)
    assert a == pytest.approx(b, rel=1e-12)


def test_diameter_examples():
    assert diameter(Graph.from_edges(6, [(i, i + 1) for i in range(5)])) == 5
    assert diameter(Graph.complete(7)) == 1
    assert diameter(Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])) == 3
    assert diameter(Graph(1)) == 0


def test_disconnected_diameter_names_pair():
    with pytest.raises(DisconnectedError) as err:
        diameter(Graph.from_edges(4, [(0, 1), (2, 3)]))
    u, v = err.value.pair
    assert {u, v} & {0, 1} and {u, v} & {2, 3}


def floyd_warshall_diameter(g):
    n = len(g)
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0)
    for u, v in g.edges():
        d[u, v] = d[v, u] = 1
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return int(d.max())


def test_diameter_matches_floyd_warshall():
    rng = random.Random(0)
    done = 0
    while done < 20:
        g = random_graph(rng.randint(1, 30), rng.uniform(0.05, 0.4), rng)
        if g.is_connected():
            assert diameter(g) == floyd_warshall_diameter(g)
            done += 1


def test_exponential_fit_exact_data():
    xs = np.arange(0, 400, 7.0)
    fit = fit_exponential(xs, 0.01364 * np.exp(-0.02055 * xs))
    assert fit.a == pytest.approx(0.01364, rel=1e-6)
    assert fit.b == pytest.approx(-0.02055, rel=1e-6)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)
    xs = np.arange(11.0)
    fit = fit_exponential(xs, 2 * np.exp(-xs))
    assert fit.a == pytest.approx(2, rel=1e-12) and fit.b == pytest.approx(-1, rel=1e-12)


def test_exponential_fit_constant_and_bad_values():
    fit = fit_exponential([0, 1, 2, 3], [0.5] * 4)
    assert fit.b == 0 and math.isnan(fit.r2)
    with pytest.raises(AnalysisError):
        fit_exponential([0, 1, 2], [1.0, 0.0, 0.5])


def test_fit_trace_uses_iteration_axis():
    t = ConvergenceTrace([(0, 1.0), (5, math.exp(-5)), (9, math.exp(-9))])
    fit = fit_trace(t)
    assert fit.b == pytest.approx(-1) and fit.a == pytest.approx(1)


def test_linear_fit():
    xs = np.array([5.0, 10, 15, 20])
    fit = fit_linear(xs, 12.76 * xs - 61.95)
    assert fit.slope == pytest.approx(12.76, rel=1e-13)
    assert fit.intercept == pytest.approx(-61.95, rel=1e-13)
    assert fit_linear([1, 2], [3, 7]).r2 == 1.0
    assert fit_linear([1, 2, 3], [4, 4, 4]).slope == 0
    with pytest.raises(AnalysisError):
        fit_linear([1, 1], [2, 3])


def test_densification_report_rows():
    res = generate_base(preset("linkedin"), TerminationSpec(max_iterations=400), seed=0)
    rows = densification_report(res.events, quarter_checkpoints(res.iterations))
    assert [r.iteration for r in rows] == [0, 100, 200, 300, 400]
    assert rows[0].avg_degree == 4.0 and rows[0].diameter == 1
    assert all(a.nodes <= b.nodes for a, b in zip(rows, rows[1:]))
    assert rows[-1].nodes == len(res.graph) and rows[-1].edges == res.graph.number_of_edges()
