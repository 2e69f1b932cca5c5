"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every criterion prints one line, ``PASS`` or ``FAIL``, with the measured
quantities. Run under pytest or directly with ``python3 tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np
import pytest

from subgradkit import bounds, schedules, solvers, verification, zoo

SEEDS = 200


def _line(n, ok, text, elapsed, budget):
    within = elapsed <= budget
    status = "PASS" if ok and within else "FAIL"
    return f"{status} [{n:>2}] {text} ({elapsed:.2f}s of {budget:g}s)", ok and within


_CERT = {}


def svm_problem():
    """Synthetic SVM (n=50, d=5, lambda=0.1, seed 7) with a long-run certificate."""
    if "svm" not in _CERT:
        svm = zoo.make_svm(zoo.synthetic_svm())
        _CERT["svm"] = svm.with_certificate(zoo.certify_optimum(svm, "long-run", 100_000))
    return _CERT["svm"]


def _dist0(prob):
    return float(np.linalg.norm(prob.initial_point() - prob.certificate.x_star))


def criterion_1():
    problems = verification.deterministic_zoo(svm_problem().certificate)
    t0 = time.perf_counter()
    recs = verification.shor_records(problems, horizons=(100, 10_000))
    elapsed = time.perf_counter() - t0
    bad = [r for r in recs if not r.passed]
    text = f"Shor exactness: {len(recs) - len(bad)}/{len(recs)} (problem, schedule, T) runs within rel 1e-9"
    return _line(1, not bad, text, elapsed, 10)


def criterion_2():
    t0 = time.perf_counter()
    ok, parts = True, []
    for d in (1, 10):
        prob = zoo.make_holder_power(d=d, L=1.0, v=1.0)
        series = []
        for T in (99, 999, 9999):
            trace = solvers.run_deterministic(prob, schedules.constant_step(1.0, T), T)
            gap, bound = trace.min_gap(), 1 / (2 * (T + 1))
            ok &= gap <= bound
            series.append((T, gap))
        slope = bounds.fit_rate_exponent(series)
        ok &= slope <= -0.9
        parts.append(f"d={d}: gaps " + ", ".join(f"{g:.3g}" for _, g in series) + f", slope {slope:+.3f}")
    elapsed = time.perf_counter() - t0
    return _line(2, ok, "C2 min gap <= 1/(2(T+1)) and slope <= -0.9; " + "; ".join(parts), elapsed, 5)


def criterion_3():
    t0 = time.perf_counter()
    prob = zoo.make_holder_power(d=1, L=1.0, v=0.5)
    R = _dist0(prob)
    ok, series, parts = True, [], []
    # a third horizon is needed to fit a slope
    for T in (100, 1000, 10_000):
        trace = solvers.run_deterministic(prob, schedules.constant_step(R, T), T)
        gap = trace.min_gap()
        bound = R**1.5 / (1.5 * (T + 1) ** 0.75)
        if T != 1000:
            ok &= gap <= bound
            parts.append(f"T={T}: {gap:.3g} <= {bound:.3g}")
        series.append((T, gap))
    slope = bounds.fit_rate_exponent(series)
    ok &= slope <= -0.7
    elapsed = time.perf_counter() - t0
    return _line(3, ok, f"C3 v=0.5: {'; '.join(parts)}; slope {slope:+.3f} <= -0.7", elapsed, 5)


def criterion_4():
    t0 = time.perf_counter()
    prob = zoo.make_additive_composite(d=1, L_phi=1.0, v=1.0, L_h=2.0)
    R = _dist0(prob)
    ok, parts = True, []
    for T in (100, 10_000):
        trace = solvers.run_deterministic(prob, schedules.constant_step(R, T), T)
        rec = verification.check_deterministic_rate(trace, prob, "C4")
        ok &= rec.passed
        parts.append(f"T={T}: {rec.lhs:.3g} <= {rec.rhs:.3g}")
    elapsed = time.perf_counter() - t0
    return _line(4, ok, "C4 composite (1, 1, 2): " + "; ".join(parts), elapsed, 5)


def criterion_5():
    prob = svm_problem()
    t0 = time.perf_counter()
    sch = schedules.quad_regularized_svm(prob.meta["lam"])
    worst, ok = -math.inf, True
    for seed in range(10):
        trace = solvers.run_stochastic(prob, sch, 1000, seed)
        rec = verification.check_lemma3_trace(prob, trace)
        ok &= rec.passed
        worst = max(worst, (rec.lhs - rec.rhs) / (1 + abs(rec.rhs)))
    elapsed = time.perf_counter() - t0
    return _line(5, ok, f"per-step inequality on 10 SVM traces x 1001 steps; worst (lhs-rhs)/(1+|rhs|) = {worst:.3g}",
                 elapsed, 30)


def _stat_line(n, prob, sch, theorem, T, budget, label):
    t0 = time.perf_counter()
    mean, se, bound, ok = verification.check_stochastic_rate(prob, sch, None, theorem, T, SEEDS)
    elapsed = time.perf_counter() - t0
    return _line(n, ok, f"{label}: mean {mean:.4g} <= bound {bound:.4g} + 3 SE ({se:.2g}), M={SEEDS}, T={T}",
                 elapsed, budget)


def criterion_6():
    prob = svm_problem()
    m = prob.second_moment
    T = 10_000
    sch = schedules.constant_step(_dist0(prob), T, L0=m.L0, L1=m.L1)
    return _stat_line(6, prob, sch, "T5", T, 300, "T5 SVM (6L^2, 6 lambda), constant step")


def criterion_7():
    prob = svm_problem()
    cert = prob.certificate
    lam = prob.meta["lam"]
    sch = schedules.quad_regularized_svm(lam)
    T = 10_000
    t0 = time.perf_counter()
    mean, se, bound, ok = verification.check_stochastic_rate(prob, sch, None, "C5", T, SEEDS)
    ok &= not cert.low_confidence and cert.residual < 1e-8 * bound
    series = []
    for Ts in (1000, 10_000, 100_000):
        m50, _ = solvers.ensemble_expectation(prob, sch, Ts, "(k+1)-weighted", 50)
        series.append((Ts, m50))
    slope = bounds.fit_rate_exponent(series)
    ok &= slope <= -0.9
    elapsed = time.perf_counter() - t0
    text = (f"C5 SVM: mean {mean:.4g} <= {bound:.4g} + 3 SE ({se:.2g}); f* residual {cert.residual:.2g}; "
            f"slope {slope:+.3f} <= -0.9 at M=50")
    return _line(7, ok, text, elapsed, 900)


def criterion_8():
    prob = zoo.make_quadratic_growth(d=3, r=1.0)
    return _stat_line(8, prob, schedules.quadratic_growth(2.0, 4.0), "QG", 10_000, 300,
                      "QG d=3 r=1, mu=2, (L0, L1)=(0, 4)")


def criterion_9():
    t0 = time.perf_counter()
    quad = zoo.make_holder_power(d=2, L=1.0, v=1.0)
    box = ([-2.0, -2.0], [2.0, 2.0])
    fwd = verification.check_prop1_forward(quad, 0.0, 2.0, box, 50)
    rev = verification.check_prop1_reverse(quad, 0.0, 2.0, box, 50)
    one = zoo.make_holder_power(d=1, L=1.0, v=1.0)
    eq = verification.prop1_upper_bound(one, 0.0, 2.0, [1.0], [2.0], 0.0)
    ok = fwd.passed and rev.passed and abs(eq - 2.0) <= 1e-12
    elapsed = time.perf_counter() - t0
    return _line(9, ok, f"quadratic upper bound: forward {fwd.passed}, reverse {rev.passed} on 50x50 grid; u_1(2) = {eq!r}",
                 elapsed, 1)


def criterion_10():
    t0 = time.perf_counter()
    recs = verification.schedule_algebra_records(mus=(0.1, 1.0, 10.0), L1s=(0.0, 1.0, 10.0), horizons=(100, 10_000))
    worst = 0.0
    for mu in (0.1, 1.0, 10.0):
        ext = schedules.extended_strongly_convex(mu, 0.0).alphas(10_000)
        cls = schedules.classic_strongly_convex(mu).alphas(10_000)
        worst = max(worst, float(np.max(np.abs(ext - cls) / cls)))
    ok = all(recs) and worst <= 1e-15
    elapsed = time.perf_counter() - t0
    return _line(10, ok, f"schedule algebra {sum(map(bool, recs))}/{len(recs)}; L1=0 reduction max rel {worst:.2g}",
                 elapsed, 1)


def criterion_11():
    problems = verification.deterministic_zoo(svm_problem().certificate)
    problems.append(zoo.make_additive_composite(d=2, L_phi=1.0, v=0.5, L_h=0.5))
    t0 = time.perf_counter()
    recs = []
    for prob in problems:
        recs.append(verification.certify_growth(prob, 1000))
        recs.append(verification.certify_second_moment(prob, 1000))
    elapsed = time.perf_counter() - t0
    bad = [r.params["problem"] + ":" + r.check_id for r in recs if not r.passed]
    text = f"growth and second-moment sweeps {len(recs) - len(bad)}/{len(recs)} at 1000 points"
    return _line(11, not bad, text + (f"; failing {bad}" if bad else ""), elapsed, 30)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 12)])
def test_acceptance(criterion, capsys):
    line, ok = criterion()
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for line, _ in results:
        print(line)
    sys.exit(0 if all(ok for _, ok in results) else 1)
