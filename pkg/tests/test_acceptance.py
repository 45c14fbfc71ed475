"""Acceptance criteria, one test each, at their stated tolerances.

Each test prints a ``[PASS]`` or ``[FAIL]`` line and appends it to the
session log shown in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from interp_learn.cli import main
from interp_learn.estimators import (
    EstimatorConfig,
    KNNRegressor,
    WeightFunction,
    WiNNRegressor,
    simplicial_predict,
    winn_predict,
)
from interp_learn.exceptions import OutsideHull
from interp_learn.geometry import affine_fit_value, interpolate_simplex, locate_delaunay_cell, max_cell_diameter
from interp_learn.graph_ssl import (
    LabeledGraph,
    complete_graph,
    fully_connected_eta,
    hoeffding_excess_bound,
    solve_graph_interpolant,
)
from interp_learn.harness import (
    ExperimentSpec,
    adversarial_density,
    fit_rate,
    hull_miss_mass,
    laplace1d_interpolant,
    mc_disagreement,
    mc_mse,
    pert1d_expectation,
    simplex_noise_demo,
)
from interp_learn.neighbors import build_index
from interp_learn.synthetic import SyntheticProblem, make_rng
from oracles import brute_force_delaunay_2d, brute_force_interpolate_2d, random_simplex

pytestmark = pytest.mark.slow


def _report(log, number, title, ok, detail, elapsed, budget):
    within = elapsed <= budget
    status = "PASS" if ok and within else "FAIL"
    line = f"[{status}] C{number:<2} {title}: {detail} ({elapsed:.1f}s, budget {budget:.0f}s)"
    print(line)
    log.append(line)
    assert ok, line
    assert within, line


def test_c01_affine_solve_equivalence(acceptance_log):
    start = time.perf_counter()
    rng = make_rng(101)
    worst = 0.0
    for i in range(1000):
        d = 1 + i % 5
        V = random_simplex(rng, d)
        y = rng.normal(size=d + 1)
        q = rng.dirichlet(np.ones(d + 1)) @ V
        worst = max(worst, abs(interpolate_simplex(V, y, q) - affine_fit_value(V, y, q)))
    el = time.perf_counter() - start
    _report(acceptance_log, 1, "simplex interpolation = affine solve", worst <= 1e-8,
            f"max |diff| = {worst:.2e} over 1000 simplices", el, 10)


def test_c02_interpolation_property(acceptance_log):
    start = time.perf_counter()
    rng = make_rng(102)
    worst_s = 0.0
    winn_exact = True
    for i in range(100):
        d = 1 + i % 4
        n = int(rng.integers(d + 10, 201))
        X, y = rng.random((n, d)), rng.random(n)
        index = build_index(X)
        k = max(1, min(n - 1, math.ceil(math.sqrt(n))))
        w = winn_predict(X, y, index, k, WeightFunction("power", d / 4), X)
        winn_exact &= bool(np.array_equal(w, y))
        # Simplicial: a subsample of training points keeps the LP count bounded.
        for j in rng.choice(n, size=min(n, 10), replace=False):
            worst_s = max(worst_s, abs(simplicial_predict(X, y, X[j]) - y[j]))
    el = time.perf_counter() - start
    _report(acceptance_log, 2, "interpolation at training points", winn_exact and worst_s <= 1e-9,
            f"wiNN exact = {winn_exact}, simplicial max err = {worst_s:.1e}", el, 30)


def test_c03_delaunay_locator_oracle(acceptance_log):
    start = time.perf_counter()
    rng = make_rng(103)
    total = agree = 0
    for cfg in range(4):
        n = int(rng.integers(5, 31))
        P, y = rng.random((n, 2)), rng.random(n)
        tris = brute_force_delaunay_2d(P)
        for q in rng.random((500, 2)) * 1.2 - 0.1:
            try:
                cell = locate_delaunay_cell(P, q)
                val = float(cell.barycentric(q) @ y[list(cell.vertex_indices)])
            except OutsideHull:
                val = 0.5
            total += 1
            agree += abs(val - brute_force_interpolate_2d(P, y, q, tris=tris)) <= 1e-8
    el = time.perf_counter() - start
    _report(acceptance_log, 3, "LP locator vs empty-circumcircle oracle", agree == total,
            f"{agree}/{total} queries agree", el, 60)


def test_c04_grid_cell_diameter(acceptance_log):
    start = time.perf_counter()
    results = []
    for eps in (0.1, 0.05):
        m = round(1 / eps)
        g = np.linspace(0.0, 1.0, m + 1)
        G = np.array(np.meshgrid(g, g)).reshape(2, -1).T
        # One probe inside every grid square, off the diagonals.
        c = (np.arange(m) + 0.3) * eps
        F = np.array(np.meshgrid(c, c)).reshape(2, -1).T
        results.append((eps, max_cell_diameter(G, F)))
    el = time.perf_counter() - start
    ok = all(diam <= 2 * eps for eps, diam in results)
    detail = ", ".join(f"eps={e}: {d:.4f}" for e, d in results)
    _report(acceptance_log, 4, "max cell diameter <= 2 eps", ok, detail, el, 30)


def test_c05_cover_hart_contrast(acceptance_log):
    start = time.perf_counter()
    prob = SyntheticProblem(dim=2, eta_kind="constant", p=0.2)
    n = 2000
    nn = mc_disagreement(ExperimentSpec(prob, KNNRegressor(1), [n], 200, 500, 5)).series["risk"][0]
    k = math.ceil(math.sqrt(n))
    wi = mc_disagreement(ExperimentSpec(prob, WiNNRegressor(k=k, delta=0.5), [n], 200, 500, 5)).series["risk"][0]
    el = time.perf_counter() - start
    ok = abs(nn.mean - 0.32) <= 0.02 and abs(wi.mean - 0.2) <= 0.02
    _report(acceptance_log, 5, "1-NN risk -> 0.32, wiNN risk -> 0.2", ok,
            f"1-NN {nn.mean:.4f}, wiNN {wi.mean:.4f}", el, 300)


def test_c06_winn_rate(acceptance_log):
    start = time.perf_counter()
    prob = SyntheticProblem(dim=2, eta_kind="lipschitz_sine", amplitude=0.3, frequency=1.0)
    n_list = [256 * 2**j for j in range(7)]
    est = EstimatorConfig("winn", k=None, alpha=1.0)  # k = ceil(n^(1/2)) in d = 2
    res = mc_mse(ExperimentSpec(prob, est, n_list, trials=50, test_points=200, master_seed=6))
    fit = fit_rate([(e.n, e.mean) for e in res.estimates])
    el = time.perf_counter() - start
    _report(acceptance_log, 6, "wiNN MSE log-log slope", -0.65 <= fit.slope <= -0.35,
            f"slope = {fit.slope:.3f} (theory -0.5), R^2 = {fit.r2:.3f}", el, 900)


def test_c07_simplicial_mse_bound(acceptance_log):
    start = time.perf_counter()
    d, n = 4, 20000
    prob = SyntheticProblem(dim=d, eta_kind="constant", p=0.2)
    res = mc_mse(ExperimentSpec(prob, EstimatorConfig("simplicial"), [n], trials=20, test_points=100, master_seed=7))
    mse = res.estimates[0].mean
    miss = hull_miss_mass(prob, n, 20, seed=7, test_points=100).mean
    bound = 1.25 * (2 / (d + 2)) * 0.16 + 0.25 * miss
    el = time.perf_counter() - start
    _report(acceptance_log, 7, "simplicial MSE within bound", mse <= bound,
            f"MSE = {mse:.4f} <= {bound:.4f} (hull miss {miss:.4f})", el, 600)


def test_c08_noisy_simplex(acceptance_log):
    start = time.perf_counter()
    rows = [(d, *simplex_noise_demo(d, samples=10**6, seed=8)) for d in (2, 3, 4)]
    el = time.perf_counter() - start
    ok = all(abs(s - 2.0**-d) <= 0.01 and s < nn for d, s, nn in rows)
    detail = ", ".join(f"d={d}: {s:.4f} vs NN {nn:.4f}" for d, s, nn in rows)
    _report(acceptance_log, 8, "simplicial fraction 2^-d < NN fraction", ok, detail, el, 60)


def test_c09_adversarial_density(acceptance_log):
    start = time.perf_counter()
    prob = SyntheticProblem(dim=2, eta_kind="constant", p=0.9)
    n = 5000
    cfg = EstimatorConfig("winn", k=math.ceil(math.sqrt(n)), delta=0.5)
    runs = [adversarial_density(prob, cfg, n, 0.05, 50, seed=s) for s in range(20)]
    cov = float(np.mean([r.covered_fraction for r in runs]))
    mass = float(np.mean([r.adversarial_mass for r in runs]))
    el = time.perf_counter() - start
    _report(acceptance_log, 9, "adversarial set dense but small", cov >= 0.99 and mass <= 0.15,
            f"covered = {cov:.4f}, mass = {mass:.4f}", el, 300)


def test_c10_complete_graph_closed_form(acceptance_log):
    start = time.perf_counter()
    labels = np.r_[np.ones(7), -np.ones(3)]
    g = LabeledGraph(complete_graph(100), np.arange(10), labels, 1.0)
    vals = solve_graph_interpolant(g).values[10:]
    target = fully_connected_eta(100, 7, 3, 1.0)
    err = float(np.max(np.abs(vals - target)))
    el = time.perf_counter() - start
    _report(acceptance_log, 10, "complete-graph closed form 4/11", err <= 1e-9 and abs(target - 4 / 11) <= 1e-15,
            f"max |eta - 4/11| = {err:.1e}", el, 1)


def test_c11_hoeffding(acceptance_log):
    start = time.perf_counter()
    rng = make_rng(11)
    y = rng.random((100_000, 50)) < 0.7
    n_plus = y.sum(axis=1)
    miss = (n_plus < 50 - n_plus).astype(float)
    se = miss.std(ddof=1) / math.sqrt(miss.size)
    bound = hoeffding_excess_bound(0.7, 50)
    el = time.perf_counter() - start
    _report(acceptance_log, 11, "P(n+ < n-) under Hoeffding bound", miss.mean() <= bound + 3 * se,
            f"{miss.mean():.5f} <= {bound:.5f} + 3*{se:.1e}", el, 10)


def test_c12_small_kappa_limit(acceptance_log):
    start = time.perf_counter()
    rng = make_rng(12)
    x = np.sort(rng.random(10))
    y = rng.random(10)
    q = np.linspace(x[0], x[-1], 200)
    lap = laplace1d_interpolant(x, y, 1e-3, q)
    err_lap = float(np.max(np.abs(lap - np.interp(q, x, y))))
    t = rng.uniform(x[0], x[-1])
    labels = (x > t).astype(float)
    pert = pert1d_expectation(x, labels, q)
    # Exact up to rounding: both sides are the same line evaluated by different formulas.
    err_pert = float(np.max(np.abs(pert - np.interp(q, x, labels))))
    el = time.perf_counter() - start
    _report(acceptance_log, 12, "Laplace kappa->0 and PERT are linear interpolation",
            err_lap <= 0.01 and err_pert <= 1e-12,
            f"Laplace sup err = {err_lap:.1e}, PERT sup err = {err_pert:.1e}", el, 5)


def test_c13_rates_thread_determinism(acceptance_log, tmp_path, capsys):
    start = time.perf_counter()
    cfg = tmp_path / "rates.yaml"
    cfg.write_text("eta: lipschitz_sine\nn_list: [128, 256, 512]\ntrials: 12\ntest_points: 100\nseed: 13\n")
    outs = []
    for threads in (1, 8):
        path = tmp_path / f"t{threads}.csv"
        code = main(["rates", "--config", str(cfg), "--threads", str(threads), "--out", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    el = time.perf_counter() - start
    _report(acceptance_log, 13, "rates CSV identical for 1 and 8 threads", outs[0] == outs[1],
            f"{len(outs[0])} bytes, identical = {outs[0] == outs[1]}", el, 600)
