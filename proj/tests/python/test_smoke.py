"""End-to-end smoke tests for the compiled bindings."""

import math

import pytest

import irdd


def test_fit_pools_violators():
    knots, values = irdd.fit([0.1, 0.2, 0.3, 0.4], [1.0, 3.0, 2.0, 4.0])
    assert knots == [0.1, 0.2, 0.3, 0.4]
    assert values == [1.0, 2.5, 2.5, 4.0]


def test_eval_fit_is_left_continuous_and_clamps():
    knots = [0.0, 1.0, 2.0]
    values = [1.0, 2.0, 3.0]
    assert irdd.eval_fit(knots, values, -5.0) == 1.0
    assert irdd.eval_fit(knots, values, 1.0) == 2.0
    assert irdd.eval_fit(knots, values, 1.5) == 3.0
    assert irdd.eval_fit(knots, values, 9.0) == 3.0


def step_sample(n_side=30):
    x, y = [], []
    for i in range(n_side):
        t = (i + 1) / (n_side + 1)
        x.append(-t)
        y.append(0.0)
        x.append(t)
        y.append(1.0)
    return x, y


def test_sharp_estimate_recovers_a_clean_step():
    x, y = step_sample()
    est = irdd.sharp_estimate(x, y)
    assert est["theta"] == pytest.approx(1.0)
    assert est["naive_theta"] == pytest.approx(1.0)
    assert est["n_minus"] == est["n_plus"] == 30


def test_fuzzy_estimate_with_sharp_treatment_matches_sharp():
    x, y = step_sample()
    d = [1 if v >= 0 else 0 for v in x]
    est = irdd.fuzzy_estimate(x, y, d)
    assert est["p_minus"] == pytest.approx(0.0)
    assert est["p_plus"] == pytest.approx(1.0)
    assert est["theta"] == pytest.approx(irdd.sharp_estimate(x, y)["theta"])


def test_sharp_wild_ci_is_deterministic_and_ordered():
    x, y, _ = irdd.dgp_sample(1, 400, seed=9)
    a = irdd.sharp_wild_ci(x, y, reps=199, seed=42)
    b = irdd.sharp_wild_ci(x, y, reps=199, seed=42)
    assert a == b
    assert a["lower"] <= a["upper"]
    assert a["reps"] == 199
    assert len(a["replicates"]) == 199


def test_dgp_sample_shape_and_support():
    x, y, d = irdd.dgp_sample(3, 200, seed=5)
    assert len(x) == len(y) == len(d) == 200
    assert all(-1.0 < v < 1.0 for v in x)
    assert all(di == (1 if xi >= 0 else 0) for xi, di in zip(x, d))
    again = irdd.dgp_sample(3, 200, seed=5)
    assert (x, y, d) == again


def test_baseline_knn_on_step():
    x, y = step_sample()
    est = irdd.baseline_estimate(x, y, method="knn")
    assert est["theta"] == pytest.approx(1.0)


def test_mc_table_row_identity():
    rows = irdd.mc_table([1], [60], ["irdd"], reps=8, seed=2)
    assert len(rows) == 1
    row = rows[0]
    assert row["dgp"] == 1 and row["n"] == 60 and row["estimator"] == "irdd"
    assert row["mse"] == pytest.approx(row["bias"] ** 2 + row["variance"])
    assert row["reps"] == 8 and row["skips"] == 0


def test_chernoff_draw_deterministic():
    g = dict(dt=0.01, horizon=2.0)
    assert irdd.chernoff_draw(31, **g) == irdd.chernoff_draw(31, **g)
    assert math.isfinite(irdd.chernoff_draw(31, **g))


def test_estimate_cstar_stays_in_range():
    out = irdd.estimate_cstar(30, seed=6, dt=0.01, c_min=0.2, c_max=0.5, c_step=0.1)
    assert 0.2 <= out["c_star"] <= 0.5
    assert len(out["c"]) == len(out["objective"])


def test_errors_surface_as_python_exceptions():
    with pytest.raises(irdd.InsufficientDataError):
        irdd.sharp_estimate([0.1, 0.2, 0.3], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        irdd.sharp_estimate(*step_sample(), a=1.5)
    with pytest.raises(irdd.WeakDiscontinuityError):
        x, y = step_sample()
        irdd.fuzzy_estimate(x, y, [1] * len(x))
