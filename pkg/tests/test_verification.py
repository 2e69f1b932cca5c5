import json

import numpy as np
import pytest

from subgradkit import bounds, schedules, solvers, verification, zoo
from subgradkit.core import ConfigurationError, FeasibleRegion
from subgradkit.verification import (
    CheckRecord,
    check_deterministic_rate,
    check_lemma3_step,
    check_prop1_forward,
    check_prop1_reverse,
    check_shor,
    check_stochastic_rate,
    prop1_upper_bound,
)

from conftest import scalar_problem


def _half_square(**kw):
    return scalar_problem(lambda x: 0.5 * x[0] ** 2, lambda x: x, x_star=0.0, f_star=0.0, **kw)


def test_lemma3_hand_example_is_tight():
    lhs, rhs, ok = check_lemma3_step(_half_square(), [1.0], [0.0], 0.5)
    assert lhs == 0.25 and rhs == 0.25 and ok


def test_lemma3_small_alpha_limit():
    lhs, rhs, ok = check_lemma3_step(_half_square(), [1.0], [-2.0], 1e-12)
    assert ok
    assert lhs == pytest.approx(9.0, rel=1e-10) and rhs == pytest.approx(9.0, rel=1e-10)


def test_lemma3_projection_only_helps():
    prob = _half_square(region=FeasibleRegion.box([0.5], [2.0]))
    lhs, rhs, ok = check_lemma3_step(prob, [1.0], [0.5], 1.0)
    # P(1 - 1) = 0.5 lands on y, the unprojected step would not
    assert lhs == 0.0 and rhs == 0.25 and ok


def test_lemma3_random_svm_triples(svm_certified):
    rng = np.random.default_rng(9)
    for _ in range(100):
        x, y = rng.standard_normal(5) * 3, rng.standard_normal(5) * 3
        alpha = float(rng.uniform(1e-4, 5.0))
        assert check_lemma3_step(svm_certified, x, y, alpha)[2]


def test_shor_equality_case():
    prob = scalar_problem(lambda x: abs(x[0]), np.sign, x_star=0.0, f_star=0.0)
    trace = solvers.run_deterministic(prob, schedules.user_sequence([1.0]), 0, x0=[1.0])
    rec = check_shor(trace, 1.0, [1.0])
    assert rec.passed
    assert rec.lhs == pytest.approx(1.0, abs=1e-12) and rec.rhs == pytest.approx(1.0, abs=1e-12)


def test_shor_terminated_run_passes():
    trace = solvers.run_deterministic(_half_square(), schedules.constant_step(1.0, 3), 3, x0=[1.0])
    rec = check_shor(trace, 1.0, trace.step_sizes)
    assert rec.passed and "terminated at k=2" in rec.note


def test_shor_detects_understated_distance():
    # ||x0 - x*|| = 3, but the bound is evaluated with R = 0.1
    prob = scalar_problem(lambda x: abs(x[0]), np.sign, x_star=0.0, f_star=0.0)
    trace = solvers.run_deterministic(prob, schedules.constant_step(0.1, 50), 50, x0=[3.0])
    assert not check_shor(trace, 0.1, trace.step_sizes).passed
    assert check_shor(trace, 3.0, trace.step_sizes).passed


def test_c2_example():
    prob = zoo.make_holder_power(d=1, L=1.0, v=1.0)
    trace = solvers.run_deterministic(prob, schedules.constant_step(1.0, 99), 99)
    rec = check_deterministic_rate(trace, prob, "C2")
    assert rec.rhs == pytest.approx(0.005, rel=1e-15)
    assert rec.passed


def test_t2_single_step_lipschitz():
    prob = zoo.make_lipschitz_norm(d=2, L=3.0)
    R = float(np.linalg.norm(prob.initial_point()))
    trace = solvers.run_deterministic(prob, schedules.user_sequence([R]), 0)
    rec = check_deterministic_rate(trace, prob, "T2")
    assert rec.passed
    assert rec.rhs >= prob.gap(prob.initial_point())


@pytest.mark.parametrize("T", [100, 10_000])
def test_c4_composite(T):
    prob = zoo.make_additive_composite(d=2, L_phi=1.0, v=1.0, L_h=2.0)
    R = float(np.linalg.norm(prob.initial_point()))
    trace = solvers.run_deterministic(prob, schedules.constant_step(R, T), T)
    assert check_deterministic_rate(trace, prob, "C4").passed


def test_corollary_needs_constant_step():
    prob = zoo.make_holder_power(d=1, L=1.0, v=1.0)
    trace = solvers.run_deterministic(prob, schedules.harmonic(10), 10)
    with pytest.raises(ConfigurationError):
        check_deterministic_rate(trace, prob, "C2")


def test_single_run_T5_without_L1():
    prob = _half_square()
    prob = prob.__class__(**{**prob.__dict__, "second_moment": bounds.SecondMomentModel(1.0, 0.0),
                             "start": np.array([0.9])})
    sch = schedules.constant_step(0.9, 50, L0=1.0)
    mean, se, bound, ok = check_stochastic_rate(prob, sch, None, "T5", 50, num_seeds=1)
    assert se == 0.0 and ok and mean <= bound
    mean3, _, bound3, _ = check_stochastic_rate(prob, sch, None, "T3", 50, num_seeds=1)
    assert bound3 == pytest.approx(bound, rel=1e-12) and mean3 == mean


def test_stochastic_rate_hypotheses(svm_certified):
    with pytest.raises(ConfigurationError, match="hypothesis"):
        check_stochastic_rate(svm_certified, schedules.constant_step(1.0, 100, L0=1.0), None, "T3", 100, 2)
    with pytest.raises(ConfigurationError, match="hypothesis"):
        check_stochastic_rate(svm_certified, schedules.quad_regularized_svm(0.1), "uniform", "C5", 100, 2)
    with pytest.raises(ConfigurationError, match="hypothesis"):
        check_stochastic_rate(svm_certified, schedules.quad_regularized_svm(0.05), None, "C5", 100, 2)


def test_prop1_equality_case():
    quad = zoo.make_holder_power(d=1, L=1.0, v=1.0)
    assert prop1_upper_bound(quad, 0.0, 2.0, [1.0], [2.0], 0.0) == pytest.approx(2.0, abs=1e-12)
    assert prop1_upper_bound(quad, 0.0, 2.0, [1.3], [1.3], 0.0) == quad.objective(np.array([1.3]))


def test_prop1_quadratic_grid():
    quad = zoo.make_holder_power(d=1, L=1.0, v=1.0)
    box = ([-2.0], [2.0])
    assert check_prop1_forward(quad, 0.0, 2.0, box, 50).passed
    rev = check_prop1_reverse(quad, 0.0, 2.0, box, 50)
    assert rev.passed and rev.lhs == pytest.approx(rev.rhs, abs=1e-12)


def test_prop1_detects_too_small_constants():
    quad = zoo.make_holder_power(d=1, L=1.0, v=1.0)
    box = ([-2.0], [2.0])
    assert not check_prop1_reverse(quad, 0.0, 1.0, box, 20).passed


def test_prop1_reverse_classic_models(svm_certified):
    lip = zoo.make_lipschitz_norm(d=2, L=1.5)
    assert check_prop1_reverse(lip, 1.5, 0.0, ([-1.0, -1.0], [1.0, 1.0]), 20).passed
    cloud = verification.sample_feasible(svm_certified, 1000, seed=4)
    m = svm_certified.second_moment
    assert check_prop1_reverse(svm_certified, m.L0, m.L1, points=cloud).passed


def test_prop1_approximate_inf_is_labelled():
    # on U = [1, 2] the infimum is 1/2, so |x|^2 <= L0^2 + 2 (x^2/2 - 1/2) needs L0 = 1
    prob = zoo.make_holder_power(d=1, L=1.0, v=1.0)
    box = ([1.0], [2.0])
    rec = check_prop1_forward(prob, 1.0, 2.0, box, 10)
    assert rec.passed and "approximate" in rec.note
    assert check_prop1_reverse(prob, 1.0, 2.0, box, 10).passed
    assert not check_prop1_forward(prob, 0.0, 2.0, box, 10).passed


def test_check_record_report(tmp_path):
    recs = [CheckRecord("a", {"x": 1}, 1.0, 2.0, True), CheckRecord("b", {"x": np.float64(2)}, 3.0, 2.0, False)]
    path = tmp_path / "r.jsonl"
    verification.write_report(recs, path)
    lines = [json.loads(s) for s in path.read_text().splitlines()]
    assert [set(r) for r in lines] == [{"check_id", "params_digest", "lhs", "rhs", "margin", "pass"}] * 2
    assert lines[0]["margin"] == 1.0 and lines[1]["pass"] is False
    assert lines[0]["params_digest"] != lines[1]["params_digest"]


def test_schedule_algebra_records_pass():
    recs = verification.schedule_algebra_records()
    assert len(recs) == 2 * 2 * 3 * 3 * 2
    assert all(recs)


def test_c2_runs_have_order_one_over_T_slope():
    prob = zoo.make_holder_power(d=2, L=1.0, v=1.0)
    series = [(T, solvers.run_deterministic(prob, schedules.constant_step(1.0, T), T).min_gap())
              for T in (100, 1000, 10_000)]
    assert bounds.fit_rate_exponent(series) <= -0.9


def test_t3_lipschitz_slope():
    prob = zoo.make_lipschitz_norm(d=3, L=2.0)
    R = float(np.linalg.norm(prob.initial_point()))
    series = []
    for T in (100, 1000, 10_000):
        mean, _, _, ok = check_stochastic_rate(prob, schedules.constant_step(R, T, L0=2.0), None, "T3", T, 2)
        assert ok
        series.append((T, mean))
    assert bounds.fit_rate_exponent(series) <= -0.4
