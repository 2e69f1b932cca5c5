"""Test problems with certificates, growth envelopes and second-moment constants."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .bounds import SecondMomentModel, composite_growth, linear_growth, power_growth
from .core import (
    ConfigurationError,
    FeasibleRegion,
    OptimumCertificate,
    Problem,
    StochasticOracle,
    as_vector,
    deterministic_as_stochastic,
    project,
)


def _unit_start(d: int, radius: float = 1.0) -> np.ndarray:
    return np.full(d, radius / math.sqrt(d))


def make_lipschitz_norm(d: int = 1, L: float = 1.0, x0=None) -> Problem:
    """f(x) = L ||x||_2: Euclidean Lipschitz constant exactly L, linear growth envelope."""
    if d < 1 or not L > 0:
        raise ConfigurationError("need d >= 1 and L > 0")

    def f(x):
        return L * float(np.linalg.norm(x))

    def grad(x):
        nrm = float(np.linalg.norm(x))
        if nrm == 0:
            return np.zeros_like(x)
        return (L / nrm) * x

    return Problem(
        dimension=d,
        objective=f,
        region=FeasibleRegion.whole_space(d),
        oracle=grad,
        stochastic_oracle=deterministic_as_stochastic(grad),
        certificate=OptimumCertificate(np.zeros(d), 0.0),
        second_moment=SecondMomentModel(L0=L, L1=0.0),
        growth_model=linear_growth(L),
        start=_unit_start(d) if x0 is None else as_vector(x0, d),
        name=f"lipschitz(d={d},L={L})",
        meta={"family": "lipschitz", "L": L},
    )


# the Euclidean instance replaces the l1 one in every dimension > 1
make_lipschitz_1norm = make_lipschitz_norm


def make_holder_power(d: int = 1, L: float = 1.0, v: float = 1.0, x0=None) -> Problem:
    """f(x) = L ||x||^(v+1) / (v+1), whose gradient is (L, v)-Hölder continuous.

    Declared second-moment constants: (0, 2L) for v = 1; otherwise
    (L, (v+1) L), which follows from t^(2v) <= 1 + t^(v+1).
    """
    if d < 1 or not L > 0 or not (0 < v <= 1):
        raise ConfigurationError("need d >= 1, L > 0 and v in (0, 1]")

    def f(x):
        return L * float(np.linalg.norm(x)) ** (v + 1) / (v + 1)

    def grad(x):
        nrm = float(np.linalg.norm(x))
        if nrm == 0:
            return np.zeros_like(x)
        return (L * nrm ** (v - 1)) * x

    moment = SecondMomentModel(0.0, 2 * L) if v == 1 else SecondMomentModel(L, (v + 1) * L)
    return Problem(
        dimension=d,
        objective=f,
        region=FeasibleRegion.whole_space(d),
        oracle=grad,
        stochastic_oracle=deterministic_as_stochastic(grad),
        certificate=OptimumCertificate(np.zeros(d), 0.0),
        second_moment=moment,
        growth_model=power_growth(L, v),
        start=_unit_start(d) if x0 is None else as_vector(x0, d),
        name=f"holder(d={d},L={L},v={v})",
        meta={"family": "holder", "L": L, "v": v},
    )


def make_additive_composite(d: int = 1, L_phi: float = 1.0, v: float = 1.0, L_h: float = 1.0, x0=None) -> Problem:
    """f = Phi + h with Phi = L_phi ||x||^(v+1)/(v+1) and h = L_h ||x||_2.

    The oracle returns grad Phi(x) + L_h x/||x||, and 0 at the joint
    minimizer x* = 0.
    """
    if d < 1 or not L_phi > 0 or not L_h > 0 or not (0 < v <= 1):
        raise ConfigurationError("need d >= 1, positive constants and v in (0, 1]")

    def f(x):
        nrm = float(np.linalg.norm(x))
        return L_phi * nrm ** (v + 1) / (v + 1) + L_h * nrm

    def grad(x):
        nrm = float(np.linalg.norm(x))
        if nrm == 0:
            return np.zeros_like(x)
        return (L_phi * nrm ** (v - 1) + L_h / nrm) * x

    # ||a + b||^2 <= 2||a||^2 + 2||b||^2 with the Phi-part bound from make_holder_power
    if v == 1:
        moment = SecondMomentModel(math.sqrt(2) * L_h, 4 * L_phi)
    else:
        moment = SecondMomentModel(math.sqrt(2 * L_phi**2 + 2 * L_h**2), 2 * (v + 1) * L_phi)
    return Problem(
        dimension=d,
        objective=f,
        region=FeasibleRegion.whole_space(d),
        oracle=grad,
        stochastic_oracle=deterministic_as_stochastic(grad),
        certificate=OptimumCertificate(np.zeros(d), 0.0),
        second_moment=moment,
        growth_model=composite_growth(L_phi, v, L_h),
        start=_unit_start(d) if x0 is None else as_vector(x0, d),
        name=f"composite(d={d},L_phi={L_phi},v={v},L_h={L_h})",
        meta={"family": "composite", "L_phi": L_phi, "v": v, "L_h": L_h},
    )


def make_quadratic_growth(d: int = 1, r: float = 1.0, x0=None) -> Problem:
    """f(x) = dist(x, B(0, r))^2.

    Minimizers form the whole ball, so the function has 2-quadratic growth
    without being strongly convex. ``||grad f||^2 = 4 (f - f*)`` gives the
    second-moment constants (0, 4).
    """
    if d < 1 or not r > 0:
        raise ConfigurationError("need d >= 1 and r > 0")
    ball = FeasibleRegion.ball(np.zeros(d), r)

    def onto_ball(x):
        return project(ball, x)

    def f(x):
        return float(np.linalg.norm(x - onto_ball(x))) ** 2

    def grad(x):
        return 2.0 * (x - onto_ball(x))

    return Problem(
        dimension=d,
        objective=f,
        region=FeasibleRegion.whole_space(d),
        oracle=grad,
        stochastic_oracle=deterministic_as_stochastic(grad),
        certificate=OptimumCertificate(np.zeros(d), 0.0, project_onto_x_star=onto_ball),
        quadratic_growth_mu=2.0,
        second_moment=SecondMomentModel(0.0, 4.0),
        # dist(x, ball) <= ||x - 0|| gives f <= t^2
        growth_model=power_growth(2.0, 1.0),
        start=_unit_start(d, 3.0 * r) if x0 is None else as_vector(x0, d),
        name=f"quadratic-growth(d={d},r={r})",
        meta={"family": "quadratic-growth", "r": r},
    )


def make_constrained_quadratic(d: int = 2, mu: float = 1.0, radius: float = 1.0, target=None,
                               noise: float = 0.5) -> Problem:
    """f(x) = (mu/2) ||x - c||^2 over the ball B(0, radius), with c outside the ball.

    The stochastic oracle adds +-noise along one coordinate axis (2d
    equally likely samples), so it is unbiased with variance noise^2.
    Bounded Q makes the classic model hold: L1 = 0 and
    L0^2 = mu^2 (radius + ||c||)^2 + noise^2.
    """
    if target is None:
        target = np.zeros(d)
        target[0] = 2.0 * radius
    c = as_vector(target, d)
    region = FeasibleRegion.ball(np.zeros(d), radius)
    x_star = project(region, c)
    if np.allclose(x_star, c):
        raise ConfigurationError("target must lie outside the ball")
    offset = float(np.linalg.norm(x_star - c))
    shifts = np.vstack([noise * np.eye(d), -noise * np.eye(d)])

    def f(x):
        diff = x - c
        return 0.5 * mu * float(diff @ diff)

    def grad(x):
        return mu * (x - c)

    def estimator(x, i):
        return mu * (x - c) + shifts[i]

    return Problem(
        dimension=d,
        objective=f,
        region=region,
        oracle=grad,
        stochastic_oracle=StochasticOracle(
            estimator=estimator, num_samples=2 * d,
            all_estimates=lambda x: mu * (x - c)[None, :] + shifts,
        ),
        certificate=OptimumCertificate(x_star, 0.5 * mu * offset**2),
        strong_convexity_mu=mu,
        second_moment=SecondMomentModel(math.sqrt(mu**2 * (radius + float(np.linalg.norm(c))) ** 2 + noise**2), 0.0),
        # f - f* = (mu/2) t^2 + mu (x - x*)^T (x* - c) <= (mu/2) t^2 + mu ||x* - c|| t
        growth_model=composite_growth(mu, 1.0, 0.5 * mu * offset),
        name=f"constrained-quadratic(d={d},mu={mu},radius={radius})",
        meta={"family": "constrained-quadratic", "mu": mu, "noise": noise},
    )


# ---------------------------------------------------------------------------
# SVM


@dataclass(frozen=True)
class SvmInstance:
    """Hinge-loss SVM data: rows of `features` are w_i, `labels` are y_i in {-1, +1}."""

    features: np.ndarray
    labels: np.ndarray
    lam: float
    L2: float = field(init=False)

    def __post_init__(self):
        W = np.atleast_2d(np.asarray(self.features, dtype=np.float64))
        y = np.asarray(self.labels, dtype=np.float64).ravel()
        if W.shape[0] < 1 or W.shape[1] < 1:
            raise ConfigurationError("SVM instance needs n >= 1 rows and d >= 1 features")
        if y.size != W.shape[0]:
            raise ConfigurationError("number of labels does not match number of rows")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ConfigurationError("labels must be -1 or +1")
        if not np.all(np.isfinite(W)):
            raise ConfigurationError("features must be finite")
        if not self.lam > 0:
            raise ConfigurationError("lambda must be > 0")
        object.__setattr__(self, "features", W)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "L2", float(np.mean(np.sum(W * W, axis=1))))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


def synthetic_svm(n: int = 50, d: int = 5, lam: float = 0.1, seed: int = 7, flip: float = 0.1) -> SvmInstance:
    """Standard-normal features, labels from a random hyperplane with a fraction flipped."""
    rng = np.random.default_rng(seed)
    W = rng.standard_normal((n, d))
    direction = rng.standard_normal(d)
    y = np.where(W @ direction >= 0, 1.0, -1.0)
    flips = rng.random(n) < flip
    y[flips] = -y[flips]
    return SvmInstance(W, y, lam)


def _svm_dual_refine(inst: SvmInstance, objective, x) -> tuple:
    """Primal candidate and weak-duality lower bound on f* near `x`.

    Support vectors are guessed from margins close to 1 and their dual
    weights fitted so those margins equal 1 exactly; the clipped weights are
    dual feasible, so the dual value is a valid lower bound.
    """
    W, y, lam, n = inst.features, inst.labels, inst.lam, inst.n
    YW = y[:, None] * W
    margins = YW @ x
    best = (x, -math.inf)
    best_gap = math.inf
    fx = objective(x)
    for tau in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8, 1e-10):
        on = np.abs(margins - 1) <= tau
        alpha = (margins < 1).astype(np.float64)
        alpha[on] = 0.0
        if np.any(on):
            base = YW.T @ alpha
            A = YW[on] @ YW[on].T / (lam * n)
            rhs = 1.0 - YW[on] @ base / (lam * n)
            sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
            alpha[on] = sol
        alpha = np.clip(alpha, 0.0, 1.0)
        xa = YW.T @ alpha / (lam * n)
        dual = math.fsum(alpha) / n - 0.5 * lam * float(xa @ xa)
        fa = objective(xa)
        cand, fc = (xa, fa) if fa < fx else (x, fx)
        if fc - dual < best_gap:
            best_gap = fc - dual
            best = (cand, dual)
    return best


def make_svm(instance: SvmInstance, certificate: Optional[OptimumCertificate] = None) -> Problem:
    """Regularized hinge-loss SVM with the finite-uniform(n) oracle g_h(x; i) + lam x.

    Second-moment constants are (sqrt(6 L^2), 6 lam). The certificate is
    supplied by the caller, typically from :func:`certify_optimum`.
    """
    W, y, lam, n = instance.features, instance.labels, instance.lam, instance.n
    YW = y[:, None] * W
    rows = [YW[i].copy() for i in range(n)]

    def f(x):
        hinge = np.maximum(0.0, 1.0 - YW @ x)
        return math.fsum(hinge) / n + 0.5 * lam * float(x @ x)

    def estimator(x, i):
        row = rows[i]
        if 1.0 - float(row @ x) >= 0:
            return lam * x - row
        return lam * x

    def all_estimates(x):
        active = (1.0 - YW @ x >= 0).astype(np.float64)
        return lam * x[None, :] - active[:, None] * YW

    def full_oracle(x):
        active = (1.0 - YW @ x >= 0).astype(np.float64)
        return lam * x - (active @ YW) / n

    L2 = instance.L2
    return Problem(
        dimension=instance.d,
        objective=f,
        region=FeasibleRegion.whole_space(instance.d),
        oracle=full_oracle,
        stochastic_oracle=StochasticOracle(estimator=estimator, num_samples=n, all_estimates=all_estimates),
        certificate=certificate,
        strong_convexity_mu=lam,
        second_moment=SecondMomentModel(math.sqrt(6 * L2), 6 * lam),
        # hinge average is (mean ||w_i||)-Lipschitz; the regularizer has a 1-Hölder gradient with constant lam
        growth_model=composite_growth(lam, 1.0, float(np.mean(np.linalg.norm(W, axis=1)))),
        start=np.zeros(instance.d),
        name=f"svm(n={n},d={instance.d},lam={lam})",
        meta={"family": "svm", "L2": L2, "lam": lam, "n": n},
        lower_bound=lambda x: _svm_dual_refine(instance, f, np.asarray(x, dtype=np.float64)),
    )


def load_svm_csv(path, lam: float = 0.1) -> SvmInstance:
    """Read rows ``label,w_1,...,w_d`` (no header, label in {-1, 1})."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    rows, labels = [], []
    width = None
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            values = [float(cell) for cell in row]
        except ValueError as exc:
            raise ConfigurationError(f"{path}:{lineno}: cannot parse number ({exc})") from None
        if len(values) < 2:
            raise ConfigurationError(f"{path}:{lineno}: need a label and at least one feature")
        if values[0] not in (-1.0, 1.0):
            raise ConfigurationError(f"{path}:{lineno}: label {row[0]!r} is not -1 or 1")
        if not all(math.isfinite(v) for v in values):
            raise ConfigurationError(f"{path}:{lineno}: non-finite feature")
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise ConfigurationError(
                f"{path}:{lineno}: dimension mismatch, expected {width - 1} features, got {len(values) - 1}"
            )
        labels.append(values[0])
        rows.append(values[1:])
    if not rows:
        raise ConfigurationError(f"{path}: no data rows")
    return SvmInstance(np.array(rows), np.array(labels), lam)


# ---------------------------------------------------------------------------
# certification


def _interval_of(region: FeasibleRegion) -> tuple[float, float]:
    kind = region.kind
    if kind == "whole-space":
        return -math.inf, math.inf
    if kind == "box":
        return float(region.lo[0]), float(region.hi[0])
    if kind == "orthant":
        return 0.0, math.inf
    if kind == "ball":
        c, r = float(region.center[0]), region.radius
        return c - r, c + r
    a, b = float(region.normal[0]), region.offset
    return (-math.inf, b / a) if a > 0 else (b / a, math.inf)


def _bisection_1d(problem: Problem, budget: int):
    """Bracket a sign change of the oracle's derivative; return (x, f(x), residual, width)."""
    f, g = problem.objective, problem.oracle

    def slope(t):
        return float(np.asarray(g(np.array([t])))[0])

    def fval(t):
        return float(f(np.array([t])))

    lo, hi = _interval_of(problem.region)
    start = float(problem.initial_point()[0])
    if slope(start) == 0:
        return start, fval(start), 0.0, 0.0
    a, width, steps = start, 1.0, 0
    while slope(a) >= 0 and a > lo:
        a = max(lo, start - width)
        width *= 2
        steps += 1
        if steps > 2000:
            raise ConfigurationError("could not bracket the minimizer from below")
    b, width = start, 1.0
    while slope(b) <= 0 and b < hi:
        b = min(hi, start + width)
        width *= 2
        steps += 1
        if steps > 4000:
            raise ConfigurationError("could not bracket the minimizer from above")
    if slope(a) >= 0:  # lower end of the region is optimal
        return a, fval(a), 0.0, 0.0
    if slope(b) <= 0:
        return b, fval(b), 0.0, 0.0
    it = 0
    while b - a > 1e-12 and it < budget:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        sm = slope(m)
        if sm == 0:
            return m, fval(m), 0.0, 0.0
        if sm < 0:
            a = m
        else:
            b = m
        it += 1
    x = 0.5 * (a + b)
    fx = fval(x)
    # tangents at a (slope < 0) and b (slope > 0) meet below the minimum on [a, b]
    fa, fb, sa, sb = fval(a), fval(b), slope(a), slope(b)
    t = (fb - fa + sa * a - sb * b) / (sa - sb)
    lower = fa + sa * (t - a)
    return x, fx, max(0.0, fx - lower), b - a


def certify_optimum(
    problem: Problem,
    method: str = "long-run",
    budget: int = 100_000,
    residual_target: float = 1e-8,
    seed: int = 0,
) -> OptimumCertificate:
    """Produce an optimum certificate for `problem`.

    ``bisection-1d`` brackets the sign change of the derivative to width
    1e-12 (d = 1 only). ``long-run`` runs the strongly convex schedule with
    the exact full oracle for `budget` steps and keeps the best iterate.
    The residual is a certified bound on ``f(x_star) - f*`` when one is
    available; certificates that miss `residual_target` are flagged
    low-confidence.
    """
    from .schedules import extended_strongly_convex
    from .solvers import run_stochastic

    if method == "bisection-1d":
        if problem.dimension != 1:
            raise ConfigurationError("bisection-1d needs a one-dimensional problem")
        if budget <= 0:
            x0 = problem.initial_point()
            return OptimumCertificate(x0, float(problem.objective(x0)), method=method,
                                      residual=math.inf, low_confidence=True)
        x, fx, residual, width = _bisection_1d(problem, budget)
        return OptimumCertificate(np.array([x]), fx, method=method, residual=residual,
                                  low_confidence=not (residual <= residual_target and width <= 1e-12))
    if method != "long-run":
        raise ConfigurationError(f"unknown certification method {method!r}")

    x0 = problem.initial_point()
    if budget <= 0:
        return OptimumCertificate(x0, float(problem.objective(x0)), method=method,
                                  residual=math.inf, low_confidence=True, seed=seed)
    mu = problem.strong_convexity_mu or problem.quadratic_growth_mu
    if not mu:
        raise ConfigurationError("long-run certification needs a strong-convexity or growth constant")
    L1 = problem.second_moment.L1 if problem.second_moment is not None else 0.0
    exact = replace(problem, stochastic_oracle=_full_oracle_as_stochastic(problem), certificate=None)
    trace = run_stochastic(exact, extended_strongly_convex(mu, L1), budget - 1, seed)
    k = int(np.argmin(trace.objective_values[:budget]))
    x_best = trace.iterates[k] if trace.iterates is not None else trace.best_point
    f_best = float(trace.objective_values[k])

    lower = -math.inf
    if problem.strong_convexity_mu:
        # any subgradient g at x gives f* >= f(x) - ||g||^2 / (2 mu)
        g = np.asarray(problem.oracle(x_best))
        lower = f_best - float(g @ g) / (2 * problem.strong_convexity_mu)
    if problem.lower_bound is not None:
        cand, lb = problem.lower_bound(x_best)
        fc = float(problem.objective(cand))
        if fc < f_best:
            x_best, f_best = np.asarray(cand, dtype=np.float64), fc
        lower = max(lower, lb)
    residual = max(0.0, f_best - lower) if math.isfinite(lower) else math.inf
    return OptimumCertificate(
        np.asarray(x_best, dtype=np.float64).copy(),
        f_best,
        method=method,
        residual=residual,
        low_confidence=not residual <= residual_target,
        seed=seed,
    )


def _full_oracle_as_stochastic(problem: Problem) -> StochasticOracle:
    return deterministic_as_stochastic(problem.oracle)
