"""Normalized deterministic and stochastic projected subgradient iterations."""

from __future__ import annotations

import math
from enum import Enum
from typing import Optional

import numpy as np

from .core import ConfigurationError, OracleError, Problem, RunTrace, fsum_vector, project
from .schedules import StepSchedule

DEFAULT_STORAGE_CAP = 1_000_000  # stored iterate coordinates per trace
ZERO_SUBGRADIENT_TOL = 1e-14


class AveragingRule(str, Enum):
    BEST_ITERATE = "best-iterate"
    UNIFORM = "uniform"
    ALPHA = "alpha-weighted"
    ALPHA_2_L1 = "alpha-(2-L1*alpha)-weighted"
    K1 = "(k+1)-weighted"
    K1_2_L1 = "(k+1)-(2-L1*alpha)-weighted"
    K1_1_L1 = "(k+1)-(1-L1*alpha)-weighted"

    @classmethod
    def parse(cls, value) -> "AveragingRule":
        if isinstance(value, cls):
            return value
        for rule in cls:
            if value in (rule.value, rule.name, rule.name.lower()):
                return rule
        raise ConfigurationError(f"unknown averaging rule {value!r}")


def rule_weights(rule: AveragingRule, alphas: np.ndarray, L1: Optional[float] = None) -> np.ndarray:
    """Averaging weights w_0..w_T for the given step sizes."""
    rule = AveragingRule.parse(rule)
    a = np.asarray(alphas, dtype=np.float64)
    k1 = np.arange(1, a.size + 1, dtype=np.float64)
    if rule in (AveragingRule.ALPHA_2_L1, AveragingRule.K1_2_L1, AveragingRule.K1_1_L1):
        if L1 is None:
            raise ConfigurationError(f"rule {rule.value!r} needs L1")
    if rule is AveragingRule.UNIFORM:
        w = np.ones_like(a)
    elif rule is AveragingRule.ALPHA:
        w = a.copy()
    elif rule is AveragingRule.ALPHA_2_L1:
        w = a * (2 - L1 * a)
    elif rule is AveragingRule.K1:
        w = k1
    elif rule is AveragingRule.K1_2_L1:
        w = k1 * (2 - L1 * a)
    elif rule is AveragingRule.K1_1_L1:
        w = k1 * (1 - L1 * a)
    else:
        raise ConfigurationError("best-iterate has no weights")
    if np.any(w < 0) or math.fsum(w) <= 0:
        raise ConfigurationError(f"rule {rule.value!r} produced negative or zero total weight")
    return w


class _VectorKahan:
    """Running compensated sum of vectors."""

    __slots__ = ("total", "comp")

    def __init__(self, d: int):
        self.total = np.zeros(d)
        self.comp = np.zeros(d)

    def add(self, v: np.ndarray) -> None:
        y = v - self.comp
        t = self.total + y
        self.comp = (t - self.total) - y
        self.total = t


class _Recorder:
    """Collects per-step quantities; drops iterates beyond the storage cap."""

    def __init__(self, problem: Problem, T: int, alphas: np.ndarray, cap: int, L1: Optional[float]):
        d = problem.dimension
        self.d = d
        self.store = (T + 2) * d <= cap
        self.X = np.empty((T + 2, d)) if self.store else None
        self.count = 0
        self.alphas = alphas
        self.L1 = L1
        self.sums = None
        self.best_f = math.inf
        self.best_x = None
        self.T = T
        if not self.store:
            self.weights = {}
            self.sums = {}
            for rule in AveragingRule:
                if rule is AveragingRule.BEST_ITERATE:
                    continue
                try:
                    self.weights[rule] = rule_weights(rule, alphas, L1)
                except ConfigurationError:
                    continue
                self.sums[rule] = (_VectorKahan(d), [])

    def add(self, x: np.ndarray, fx: Optional[float]) -> None:
        k = self.count
        if self.store:
            self.X[k] = x
        elif k <= self.T:
            for rule, (acc, wlist) in self.sums.items():
                w = self.weights[rule][k]
                acc.add(w * x)
                wlist.append(w)
        if fx is not None and k <= self.T and fx < self.best_f:
            self.best_f = fx
            self.best_x = x.copy()
        self.count += 1

    def finish(self):
        if self.store:
            return self.X[: self.count].copy(), None
        running = {
            rule.value: (acc.total.copy(), math.fsum(wlist)) for rule, (acc, wlist) in self.sums.items()
        }
        return None, running


def _finite_or_raise(value, what: str, k: int):
    arr = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise OracleError(f"{what} returned a non-finite value at iteration k={k}")
    return arr


def run_deterministic(
    problem: Problem,
    schedule: StepSchedule,
    T: int,
    x0=None,
    storage_cap: int = DEFAULT_STORAGE_CAP,
) -> RunTrace:
    """Normalized projected subgradient method.

    Stops early, recording ``terminated_at_minimizer``, when
    ``||g(x_k)|| <= 1e-14 (1 + ||x_k||)``. Hyperplane distances and gaps
    are recorded when the problem carries a certificate.
    """
    if T < 0:
        raise ConfigurationError("horizon T must be >= 0")
    region = problem.region
    cert = problem.certificate
    x = problem.initial_point(x0)
    alphas = schedule.alphas(T)
    rec = _Recorder(problem, T, alphas, storage_cap, schedule.L1)

    fvals, hyper, used = [], [], []
    terminated = None
    residual = None
    for k in range(T + 1):
        fx = float(_finite_or_raise(problem.objective(x), "objective", k))
        fvals.append(fx)
        rec.add(x, fx)
        g = _finite_or_raise(problem.oracle(x), "subgradient oracle", k)
        gnorm = float(np.linalg.norm(g))
        if gnorm <= ZERO_SUBGRADIENT_TOL * (1 + float(np.linalg.norm(x))):
            terminated = k
            residual = gnorm
            break
        alpha = alphas[k]
        used.append(alpha)
        if cert is not None:
            hyper.append(float(g @ (x - cert.x_star)) / gnorm)
        x = project(region, x - (alpha / gnorm) * g)
    else:
        fx = float(_finite_or_raise(problem.objective(x), "objective", T + 1))
        fvals.append(fx)
        rec.add(x, fx)

    iterates, running = rec.finish()
    fvals = np.array(fvals)
    return RunTrace(
        horizon=T,
        dimension=problem.dimension,
        iterates=iterates,
        step_sizes=np.array(used),
        objective_values=fvals,
        objective_gaps=fvals - cert.f_star if cert is not None else None,
        hyperplane_distances=np.array(hyper) if cert is not None else None,
        terminated_at_minimizer=terminated,
        running_sums=running,
        best_point=rec.best_x,
        minimizer_residual=residual,
    )


def draw_samples(problem: Problem, T: int, seed: int):
    """The xi_0..xi_T sequence a stochastic run with `seed` would use."""
    oracle = problem.stochastic_oracle
    rng = np.random.default_rng(seed)
    if oracle.is_finite:
        return rng.integers(oracle.num_samples, size=T + 1)
    return [oracle.sampler(rng) for _ in range(T + 1)]


def run_stochastic(
    problem: Problem,
    schedule: StepSchedule,
    T: int,
    seed: int,
    x0=None,
    record_objective: bool = True,
    storage_cap: int = DEFAULT_STORAGE_CAP,
) -> RunTrace:
    """Stochastic projected subgradient method ``x <- P(x - alpha_k g(x; xi_k))``.

    The sample sequence is a pure function of `seed`, so equal inputs give
    bitwise-equal traces.
    """
    oracle = problem.stochastic_oracle
    if oracle is None:
        raise ConfigurationError(f"problem {problem.name!r} has no stochastic oracle")
    if T < 0:
        raise ConfigurationError("horizon T must be >= 0")
    region = problem.region
    cert = problem.certificate
    alphas = schedule.alphas(T)
    if schedule.kind == "constant-horizon" and schedule.L1 is not None and np.any(schedule.L1 * alphas >= 2):
        raise ConfigurationError("schedule violates L1 * alpha_k < 2")
    samples = draw_samples(problem, T, seed)
    x = problem.initial_point(x0)
    rec = _Recorder(problem, T, alphas, storage_cap, schedule.L1)
    estimator = oracle.estimator
    whole = region.kind == "whole-space"
    steps = alphas.tolist()
    xis = samples.tolist() if oracle.is_finite else samples

    fvals = [] if record_objective else None
    for k in range(T + 1):
        if record_objective:
            fx = float(_finite_or_raise(problem.objective(x), "objective", k))
            fvals.append(fx)
        else:
            fx = None
        rec.add(x, fx)
        g = np.asarray(estimator(x, xis[k]), dtype=np.float64)
        if not np.isfinite(g).all():
            raise OracleError(f"stochastic oracle returned a non-finite value at iteration k={k}")
        y = x - steps[k] * g
        x = y if whole else project(region, y)
    if not np.all(np.isfinite(x)):
        raise OracleError("iterate became non-finite")
    if record_objective:
        fvals.append(float(_finite_or_raise(problem.objective(x), "objective", T + 1)))
    rec.add(x, fvals[-1] if record_objective else None)

    iterates, running = rec.finish()
    fvals = np.array(fvals) if record_objective else None
    return RunTrace(
        horizon=T,
        dimension=problem.dimension,
        iterates=iterates,
        step_sizes=alphas,
        objective_values=fvals,
        objective_gaps=(fvals - cert.f_star) if (cert is not None and fvals is not None) else None,
        samples=np.asarray(samples) if oracle.is_finite else samples,
        seed=seed,
        stochastic=True,
        running_sums=running,
        best_point=rec.best_x,
    )


def weighted_average(trace: RunTrace, rule, schedule: Optional[StepSchedule] = None, L1: Optional[float] = None) -> np.ndarray:
    """Theorem-prescribed output point of a run.

    Weighted rules return ``sum w_k x_k / sum w_k`` over k = 0..T; the
    best-iterate rule returns the smallest-objective iterate, ties going to
    the smallest k. `L1` defaults to ``schedule.L1``.
    """
    rule = AveragingRule.parse(rule)
    if L1 is None and schedule is not None:
        L1 = schedule.L1
    if rule is AveragingRule.BEST_ITERATE:
        if trace.iterates is None or trace.objective_values is None:
            if trace.best_point is None:
                raise ConfigurationError("best-iterate needs recorded objective values")
            return trace.best_point.copy()
        n = min(trace.horizon + 1, trace.iterates.shape[0])
        k = int(np.argmin(trace.objective_values[:n]))
        return trace.iterates[k].copy()
    if trace.terminated_at_minimizer is not None:
        raise ConfigurationError("weighted averages are undefined for runs stopped at a minimizer")
    if schedule is not None:
        alphas = schedule.alphas(trace.horizon)
    else:
        alphas = np.asarray(trace.step_sizes)[: trace.horizon + 1]
    if trace.iterates is None:
        if trace.running_sums is None or rule.value not in trace.running_sums:
            raise ConfigurationError(f"trace holds no running sum for rule {rule.value!r}")
        total, weight = trace.running_sums[rule.value]
        if weight <= 0:
            raise ConfigurationError("total weight must be positive")
        return total / weight
    w = rule_weights(rule, alphas, L1)
    X = trace.iterates[: trace.horizon + 1]
    if X.shape[0] < 1:
        raise ConfigurationError("trace has no iterates")
    total = math.fsum(w)
    return fsum_vector(w[:, None] * X) / total


def mean_and_standard_error(values) -> tuple[float, float]:
    """Sample mean and standard error of the mean (ddof = 1)."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        raise ConfigurationError("need at least two samples for a standard error")
    mean = math.fsum(v) / v.size
    var = math.fsum((v - mean) ** 2) / (v.size - 1)
    return mean, math.sqrt(var / v.size)


def ensemble_gaps(
    problem: Problem,
    schedule: StepSchedule,
    T: int,
    rule,
    num_seeds: int,
    base_seed: int = 0,
    x0=None,
) -> np.ndarray:
    """Gap of the rule's output point for seeds base_seed .. base_seed+M-1, in seed order."""
    if problem.certificate is None:
        raise ConfigurationError("ensemble gaps need an optimum certificate")
    rule = AveragingRule.parse(rule)
    need_f = rule is AveragingRule.BEST_ITERATE
    gaps = np.empty(num_seeds)
    for j in range(num_seeds):
        seed = base_seed + j
        try:
            trace = run_stochastic(problem, schedule, T, seed, x0=x0, record_objective=need_f)
            point = weighted_average(trace, rule, schedule)
            gaps[j] = problem.gap(point)
        except (OracleError, ConfigurationError) as exc:
            raise type(exc)(f"seed {seed}: {exc}") from exc
    return gaps


def ensemble_expectation(
    problem: Problem,
    schedule: StepSchedule,
    T: int,
    rule,
    num_seeds: int,
    base_seed: int = 0,
    x0=None,
) -> tuple[float, float]:
    """Monte-Carlo mean gap of the averaged point and its standard error."""
    if num_seeds < 2:
        raise ConfigurationError("ensemble needs at least 2 seeds")
    gaps = ensemble_gaps(problem, schedule, T, rule, num_seeds, base_seed, x0)
    return mean_and_standard_error(gaps)
