"""Executable checks of the per-step inequality, the rate theorems and model declarations.

Every check returns a :class:`CheckRecord` (truthy iff it passed) or, where
noted, a tuple. Suites collect records; :func:`write_report` serializes them
as JSON lines.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional

import numpy as np

from . import bounds, schedules, solvers
from .core import (
    ConfigurationError,
    Problem,
    RunTrace,
    UnsupportedOperation,
    exact_expectation,
    project,
    subgradient_inequality_check,
)
from .solvers import AveragingRule

REL_TOL = 1e-9


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class CheckRecord:
    check_id: str
    params: dict
    lhs: float
    rhs: float
    passed: bool
    note: str = ""
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.passed)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def params_digest(self) -> str:
        blob = json.dumps(_jsonable(self.params), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def to_dict(self) -> dict:
        out = {
            "check_id": self.check_id,
            "params_digest": self.params_digest,
            "lhs": _jsonable(float(self.lhs)),
            "rhs": _jsonable(float(self.rhs)),
            "margin": _jsonable(float(self.margin)),
            "pass": bool(self.passed),
        }
        if self.note:
            out["note"] = self.note
        return out


def write_report(records: Iterable[CheckRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict()) + "\n")


def _le(lhs: float, rhs: float, rel: float = REL_TOL) -> bool:
    return lhs <= rhs + rel * (1 + abs(rhs))


# ---------------------------------------------------------------------------
# per-step inequality


def check_lemma3_step(problem: Problem, x, y, alpha: float) -> tuple[float, float, bool]:
    """Projected-step inequality with expectations enumerated exactly.

    lhs = E ||P(x - alpha g) - y||^2, rhs = ||x - y||^2 - 2 alpha (E g)^T (x - y)
    + alpha^2 E ||g||^2.
    """
    oracle = problem.stochastic_oracle
    if oracle is None or not oracle.is_finite:
        raise UnsupportedOperation("per-step check needs a finite-uniform stochastic oracle")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    region = problem.region
    G = oracle.estimates(x)
    n = G.shape[0]
    steps = x[None, :] - alpha * G
    if region.kind != "whole-space":
        steps = np.array([project(region, row) for row in steps])
    lhs = math.fsum(np.sum((steps - y) ** 2, axis=1)) / n
    mean_g = np.array([math.fsum(col) for col in G.T]) / n
    diff = x - y
    sq = math.fsum(np.sum(G * G, axis=1)) / n
    rhs = math.fsum([float(diff @ diff), -2 * alpha * float(mean_g @ diff), alpha**2 * sq])
    return lhs, rhs, _le(lhs, rhs)


def check_lemma3_trace(problem: Problem, trace: RunTrace, y=None) -> CheckRecord:
    """Per-step inequality at every (x_k, alpha_k) of a stored trace, y = x* by default."""
    if trace.iterates is None:
        raise ConfigurationError("trace has no stored iterates")
    if y is None:
        if problem.certificate is None:
            raise ConfigurationError("need y or a certificate")
        y = problem.certificate.x_star
    worst = None
    for k in range(min(len(trace.step_sizes), trace.iterates.shape[0])):
        lhs, rhs, ok = check_lemma3_step(problem, trace.iterates[k], y, trace.step_sizes[k])
        ratio = (lhs - rhs) / (1 + abs(rhs))
        if worst is None or ratio > worst[0]:
            worst = (ratio, lhs, rhs, k)
    _, lhs, rhs, k = worst
    return CheckRecord(
        "lemma3_trace",
        {"problem": problem.name, "seed": trace.seed, "T": trace.horizon},
        lhs,
        rhs,
        _le(lhs, rhs),
        note=f"worst step k={k}",
    )


# ---------------------------------------------------------------------------
# deterministic checks


def check_shor(trace: RunTrace, R: float, alphas) -> CheckRecord:
    """Minimum hyperplane distance against (R^2 + sum alpha^2)/(2 sum alpha).

    A run stopped by the zero-subgradient test satisfies the theorem's
    minimizer branch; the residual norm is recorded in the note.
    """
    if trace.hyperplane_distances is None:
        raise ConfigurationError("trace has no hyperplane distances (missing certificate)")
    rhs = bounds.shor_rhs(R, alphas)
    params = {"R": R, "T": trace.horizon, "alphas_digest": float(np.sum(alphas))}
    if trace.terminated_at_minimizer is not None:
        lhs = min(trace.hyperplane_distances, default=0.0)
        return CheckRecord("shor", params, float(lhs), rhs, True,
                           note=f"terminated at k={trace.terminated_at_minimizer}, "
                                f"residual={trace.minimizer_residual:.3g}")
    lhs = float(np.min(trace.hyperplane_distances))
    return CheckRecord("shor", params, lhs, rhs, lhs <= rhs * (1 + REL_TOL))


def _constant_R(trace: RunTrace, R: float) -> None:
    expected = R / math.sqrt(trace.horizon + 1)
    steps = np.asarray(trace.step_sizes)
    if steps.size and np.any(np.abs(steps - expected) > 1e-12 * expected):
        raise ConfigurationError("corollary bounds assume the constant step R/sqrt(T+1)")


def check_deterministic_rate(trace: RunTrace, problem: Problem, theorem: str, R: Optional[float] = None,
                             alphas=None) -> CheckRecord:
    """min_k f(x_k) - f* against T2, C2, C3 or C4.

    `R` defaults to ``||x_0 - x*||`` from the certificate; `alphas` (T2
    only) defaults to the trace's step sizes.
    """
    if problem.certificate is None:
        raise ConfigurationError("deterministic rate check needs a certificate")
    growth = problem.growth_model
    if growth is None:
        raise ConfigurationError(f"problem {problem.name!r} declares no growth model")
    x0 = trace.iterates[0] if trace.iterates is not None else problem.initial_point()
    if R is None:
        R = float(np.linalg.norm(x0 - problem.certificate.x_star))
    T = trace.horizon
    lhs = trace.min_gap()
    if theorem == "T2":
        if alphas is None:
            alphas = trace.step_sizes
        if trace.terminated_at_minimizer is not None:
            rhs = 0.0 if len(alphas) == 0 else bounds.theorem_rhs("T2", R=R, alphas=alphas, growth=growth)
            return CheckRecord("rate_T2", {"problem": problem.name, "T": T}, lhs, rhs,
                               True, note="stopped at a minimizer")
        rhs = bounds.theorem_rhs("T2", R=R, alphas=alphas, growth=growth)
    elif theorem == "C2":
        if growth.kind != "power" or growth.v != 1:
            raise ConfigurationError("C2 needs a power growth model with v = 1")
        _constant_R(trace, R)
        rhs = bounds.theorem_rhs("C2", L=growth.L, R=R, T=T)
    elif theorem == "C3":
        if growth.kind != "power":
            raise ConfigurationError("C3 needs a power growth model")
        _constant_R(trace, R)
        rhs = bounds.theorem_rhs("C3", L=growth.L, R=R, T=T, v=growth.v)
    elif theorem == "C4":
        if growth.kind != "composite":
            raise ConfigurationError("C4 needs a composite growth model")
        _constant_R(trace, R)
        rhs = bounds.theorem_rhs("C4", L_phi=growth.L, L_h=growth.L_h, R=R, T=T, v=growth.v)
    else:
        raise ConfigurationError(f"{theorem!r} is not a deterministic rate theorem")
    if rhs is bounds.UNBOUNDED:
        return CheckRecord(f"rate_{theorem}", {"problem": problem.name, "T": T}, lhs, math.inf, True,
                           note="envelope unbounded")
    return CheckRecord(f"rate_{theorem}", {"problem": problem.name, "T": T, "R": R}, lhs, rhs,
                       lhs <= rhs * (1 + REL_TOL))


# ---------------------------------------------------------------------------
# stochastic rate checks

_THEOREM_RULES = {
    "T3": AveragingRule.ALPHA,
    "T4": AveragingRule.K1,
    "T5": AveragingRule.ALPHA_2_L1,
    "T6": AveragingRule.K1_2_L1,
    "T6-simple": AveragingRule.K1,
    "C5": AveragingRule.K1,
    "QG": AveragingRule.K1_1_L1,
}


def theorem_rule(theorem: str) -> AveragingRule:
    try:
        return _THEOREM_RULES[theorem]
    except KeyError:
        raise ConfigurationError(f"{theorem!r} is not a stochastic rate theorem") from None


def _strong_convexity_pair(problem: Problem, schedule) -> tuple[float, float]:
    """(mu, L1) the extended strongly convex schedule was built with."""
    if schedule.kind == "extended-strongly-convex":
        return schedule.mu, schedule.L1
    if schedule.kind == "quad-regularized-svm":
        return schedule.lam, 6 * schedule.lam
    raise ConfigurationError(f"hypothesis violated: schedule {schedule.kind!r} is not the strongly convex schedule")


def stochastic_bound(problem: Problem, schedule, theorem: str, T: int, x0=None) -> tuple[float, float]:
    """Validate hypotheses and return (bound, L1 used for averaging weights)."""
    cert = problem.certificate
    if cert is None:
        raise ConfigurationError("hypothesis violated: no optimum certificate (f* unknown)")
    moment = problem.second_moment
    if moment is None:
        raise ConfigurationError("hypothesis violated: no second-moment model declared")
    x0 = problem.initial_point(x0)
    R = float(np.linalg.norm(x0 - cert.x_star))
    alphas = schedule.alphas(T)

    if theorem == "T3":
        if moment.L1 != 0:
            raise ConfigurationError("hypothesis violated: T3 needs L1 = 0 (uniform second-moment bound)")
        return bounds.theorem_rhs("T3", R=R, L=moment.L0, alphas=alphas), 0.0
    if theorem == "T4":
        mu = problem.strong_convexity_mu
        if not mu:
            raise ConfigurationError("hypothesis violated: T4 needs strong_convexity_mu")
        if moment.L1 != 0:
            raise ConfigurationError("hypothesis violated: T4 needs L1 = 0")
        if schedule.kind != "classic-strongly-convex" or schedule.mu > mu:
            raise ConfigurationError("hypothesis violated: T4 needs the classic schedule with mu <= problem mu")
        return bounds.theorem_rhs("T4", L=moment.L0, mu=schedule.mu, T=T), 0.0
    if theorem == "T5":
        L1 = moment.L1
        if np.any(L1 * alphas >= 2):
            raise ConfigurationError("hypothesis violated: T5 needs L1 * alpha_k < 2")
        return bounds.theorem_rhs("T5", R=R, L0=moment.L0, L1=L1, alphas=alphas), L1
    if theorem in ("T6", "T6-simple", "C5"):
        mu = problem.strong_convexity_mu
        if not mu:
            raise ConfigurationError(f"hypothesis violated: {theorem} needs strong_convexity_mu")
        smu, sL1 = _strong_convexity_pair(problem, schedule)
        if smu > mu * (1 + 1e-12):
            raise ConfigurationError("hypothesis violated: schedule mu exceeds the problem's strong convexity")
        if sL1 < moment.L1 * (1 - 1e-12):
            raise ConfigurationError("hypothesis violated: schedule L1 is below the problem's L1")
        # the declared (L0, L1) model holds for any larger L1, so the schedule's L1 is used
        if theorem == "T6":
            return bounds.theorem_rhs("T6", R=R, L0=moment.L0, L1=sL1, mu=smu, alphas=alphas), sL1
        if theorem == "T6-simple":
            return bounds.theorem_rhs("T6-simple", R=R, L0=moment.L0, L1=sL1, mu=smu, T=T), sL1
        if problem.meta.get("family") != "svm" or schedule.kind != "quad-regularized-svm":
            raise ConfigurationError("hypothesis violated: C5 needs the SVM family and its schedule")
        if abs(schedule.lam - problem.meta["lam"]) > 1e-12 * problem.meta["lam"]:
            raise ConfigurationError("hypothesis violated: schedule lambda differs from the problem's")
        return bounds.theorem_rhs("C5", L=math.sqrt(problem.meta["L2"]), lam=schedule.lam, R=R, T=T), sL1
    if theorem == "QG":
        mu = problem.quadratic_growth_mu
        if not mu:
            raise ConfigurationError("hypothesis violated: QG needs quadratic_growth_mu")
        if schedule.kind != "quadratic-growth" or schedule.mu > mu * (1 + 1e-12):
            raise ConfigurationError("hypothesis violated: QG needs the quadratic-growth schedule with mu <= problem mu")
        if schedule.L1 < moment.L1 * (1 - 1e-12):
            raise ConfigurationError("hypothesis violated: schedule L1 is below the problem's L1")
        dist0 = cert.dist_to_solution_set(x0)
        return bounds.theorem_rhs("QG", R=dist0, L0=moment.L0, L1=schedule.L1, mu=schedule.mu, alphas=alphas), schedule.L1
    raise ConfigurationError(f"{theorem!r} is not a stochastic rate theorem")


def check_stochastic_rate(problem: Problem, schedule, rule, theorem: str, T: int, num_seeds: int = 200,
                          base_seed: int = 0, x0=None) -> tuple[float, float, float, bool]:
    """Ensemble mean gap of the theorem's averaged point against its bound.

    Passes iff mean <= bound + 3 SE. Returns (mean, SE, bound, pass).
    """
    expected = theorem_rule(theorem)
    rule = expected if rule is None else AveragingRule.parse(rule)
    if rule is not expected:
        raise ConfigurationError(f"hypothesis violated: {theorem} bounds the {expected.value} average, not {rule.value}")
    bound, L1 = stochastic_bound(problem, schedule, theorem, T, x0)
    gaps = np.empty(num_seeds)
    for j in range(num_seeds):
        trace = solvers.run_stochastic(problem, schedule, T, base_seed + j, x0=x0, record_objective=False)
        point = solvers.weighted_average(trace, rule, schedule, L1=L1)
        gaps[j] = problem.gap(point)
    if num_seeds >= 2:
        mean, se = solvers.mean_and_standard_error(gaps)
    else:
        mean, se = float(gaps[0]), 0.0
    return mean, se, bound, bool(mean <= bound + 3 * se)


def stochastic_rate_record(problem, schedule, theorem, T, num_seeds=200, base_seed=0) -> CheckRecord:
    mean, se, bound, ok = check_stochastic_rate(problem, schedule, None, theorem, T, num_seeds, base_seed)
    return CheckRecord(f"rate_{theorem}", {"problem": problem.name, "schedule": schedule.to_dict(), "T": T,
                                           "M": num_seeds, "base_seed": base_seed},
                       mean, bound + 3 * se, ok, note=f"mean={mean:.6g} se={se:.3g} bound={bound:.6g}")


# ---------------------------------------------------------------------------
# quadratic upper-bound characterization


def _grid_points(sample_box, grid: int) -> np.ndarray:
    lo, hi = (np.atleast_1d(np.asarray(b, dtype=np.float64)) for b in sample_box)
    axes = [np.linspace(a, b, grid) for a, b in zip(lo, hi)]
    return np.array(list(product(*axes)))


def _inf_over_box(problem: Problem, points: np.ndarray, sample_box, inf_value) -> tuple[float, bool]:
    if inf_value is not None:
        return float(inf_value), True
    cert = problem.certificate
    lo, hi = (np.atleast_1d(np.asarray(b, dtype=np.float64)) for b in sample_box)
    if cert is not None and np.all(cert.x_star >= lo) and np.all(cert.x_star <= hi):
        return cert.f_star, True
    return float(min(problem.objective(p) for p in points)), False


def check_prop1_forward(problem: Problem, L0: float, L1: float, sample_box, grid: int = 50,
                        inf_value: Optional[float] = None) -> CheckRecord:
    """f(y) <= f(x) + L1/4 ||y-x||^2 + ||y-x|| sqrt(L1 (f(x) - inf) + L0^2) on all grid pairs."""
    pts = _grid_points(sample_box, grid)
    inf, exact = _inf_over_box(problem, pts, sample_box, inf_value)
    fv = np.array([float(problem.objective(p)) for p in pts])
    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)  # [x, y]
    root = np.sqrt(np.maximum(L1 * (fv - inf) + L0**2, 0.0))
    rhs = fv[:, None] + 0.25 * L1 * dist**2 + dist * root[:, None]
    lhs = np.broadcast_to(fv[None, :], rhs.shape)
    excess = (lhs - rhs) / (1 + np.abs(rhs))
    i, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
    return CheckRecord("prop1_forward", {"problem": problem.name, "L0": L0, "L1": L1, "grid": grid},
                       float(lhs[i, j]), float(rhs[i, j]), bool(np.all(excess <= REL_TOL)),
                       note="" if exact else "approximate: inf estimated on the grid")


def prop1_upper_bound(problem: Problem, L0: float, L1: float, x, y, inf_value: float) -> float:
    """The quadratic upper bound u_x(y)."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    fx = float(problem.objective(x))
    r = float(np.linalg.norm(y - x))
    return fx + 0.25 * L1 * r**2 + r * math.sqrt(L1 * (fx - inf_value) + L0**2)


def check_prop1_reverse(problem: Problem, L0: float, L1: float, sample_box=None, grid: int = 50,
                        points=None, inf_value: Optional[float] = None) -> CheckRecord:
    """||g(x)||^2 <= L0^2 + L1 (f(x) - inf) + 1e-9 at every grid point (or supplied point cloud)."""
    if points is None:
        pts = _grid_points(sample_box, grid)
        inf, exact = _inf_over_box(problem, pts, sample_box, inf_value)
    else:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if inf_value is None and problem.certificate is None:
            raise ConfigurationError("point-cloud check needs inf_value or a certificate")
        inf, exact = (inf_value if inf_value is not None else problem.certificate.f_star), True
    worst = (-math.inf, 0.0, 0.0)
    for p in pts:
        g = np.asarray(problem.oracle(p))
        lhs = float(g @ g)
        rhs = L0**2 + L1 * (float(problem.objective(p)) - inf)
        if lhs - rhs > worst[0]:
            worst = (lhs - rhs, lhs, rhs)
    _, lhs, rhs = worst
    return CheckRecord("prop1_reverse", {"problem": problem.name, "L0": L0, "L1": L1, "n": len(pts)},
                       lhs, rhs, lhs <= rhs + 1e-9, note="" if exact else "approximate: inf estimated on the grid")


# ---------------------------------------------------------------------------
# model declarations


def sample_feasible(problem: Problem, num: int = 1000, seed: int = 0, scale: Optional[float] = None) -> np.ndarray:
    """Seeded feasible points spread around x* (directions uniform, radii uniform on [0, scale])."""
    rng = np.random.default_rng(seed)
    d = problem.dimension
    center = problem.certificate.x_star if problem.certificate is not None else problem.initial_point()
    if scale is None:
        scale = max(4.0, 3.0 * float(np.linalg.norm(problem.initial_point() - center)))
    dirs = rng.standard_normal((num, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = rng.uniform(0.0, scale, size=num)
    pts = center + dirs * radii[:, None]
    return np.array([project(problem.region, p) for p in pts])


def certify_growth(problem: Problem, num: int = 1000, seed: int = 0) -> CheckRecord:
    """f(x) - f* <= D(||x - x*||)(1 + 1e-9) at seeded feasible samples."""
    cert, growth = problem.certificate, problem.growth_model
    if cert is None or growth is None:
        raise ConfigurationError("growth certification needs a certificate and a growth model")
    worst = (-math.inf, 0.0, 0.0)
    ok = True
    for p in sample_feasible(problem, num, seed):
        gap = float(problem.objective(p)) - cert.f_star
        env = growth(float(np.linalg.norm(p - cert.x_star)))
        if env is bounds.UNBOUNDED:
            continue
        if gap > env * (1 + REL_TOL):
            ok = False
        if gap - env > worst[0]:
            worst = (gap - env, gap, env)
    return CheckRecord("growth_model", {"problem": problem.name, "n": num, "seed": seed},
                       worst[1], worst[2], ok)


def certify_second_moment(problem: Problem, num: int = 1000, seed: int = 0) -> CheckRecord:
    """E||g(x; xi)||^2 <= L0^2 + L1 (f(x) - f*) + 1e-9, expectations enumerated exactly."""
    cert, moment, oracle = problem.certificate, problem.second_moment, problem.stochastic_oracle
    if cert is None or moment is None or oracle is None or not oracle.is_finite:
        raise ConfigurationError("second-moment certification needs a certificate, (L0, L1) and a finite oracle")
    worst = (-math.inf, 0.0, 0.0)
    for p in sample_feasible(problem, num, seed):
        G = oracle.estimates(p)
        lhs = math.fsum(np.sum(G * G, axis=1)) / G.shape[0]
        rhs = moment.bound(float(problem.objective(p)) - cert.f_star)
        if lhs - rhs > worst[0]:
            worst = (lhs - rhs, lhs, rhs)
    _, lhs, rhs = worst
    return CheckRecord("second_moment", {"problem": problem.name, "n": num, "seed": seed},
                       lhs, rhs, lhs <= rhs + 1e-9)


def check_oracle_subgradients(problem: Problem, num: int = 20, probes: int = 100, seed: int = 0) -> CheckRecord:
    """Deterministic oracle (and mean stochastic estimate, if finite) pass the subgradient inequality."""
    rng = np.random.default_rng(seed)
    pts = sample_feasible(problem, num, seed)
    ok = True
    for x in pts:
        probe = sample_feasible(problem, probes, int(rng.integers(2**31)))
        ok &= subgradient_inequality_check(problem, x, problem.oracle(x), probe)
        oracle = problem.stochastic_oracle
        if oracle is not None and oracle.is_finite:
            ok &= subgradient_inequality_check(problem, x, exact_expectation(oracle, x), probe)
    return CheckRecord("subgradient_oracle", {"problem": problem.name, "n": num, "probes": probes},
                       0.0, 0.0, bool(ok))


# ---------------------------------------------------------------------------
# suites


def _recurrence_residual(sch, T) -> float:
    # worst relative mismatch of the recurrence, for the report only
    shift = sch.mu if sch.kind == "extended-strongly-convex" else sch.mu / 2
    a = sch.alphas(T)
    k = np.arange(T, dtype=np.float64)
    lhs = (k + 1) / a[:-1]
    rhs = (k + 2) * (1.0 / a[1:] - shift)
    return float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), np.abs(rhs))))


def schedule_algebra_records(mus=(0.1, 1.0, 10.0), L1s=(0.0, 1.0, 10.0), horizons=(100, 10_000)) -> list[CheckRecord]:
    out = []
    for kind, make in (("extended-strongly-convex", schedules.extended_strongly_convex),
                       ("quadratic-growth", schedules.quadratic_growth)):
        for mu, L1, T in product(mus, L1s, horizons):
            sch = make(mu, L1)
            params = {"kind": kind, "mu": mu, "L1": L1, "T": T}
            tag = f"[{kind},mu={mu},L1={L1},T={T}]"
            out.append(CheckRecord("verify_recurrence" + tag, params, _recurrence_residual(sch, T), 1e-10,
                                   schedules.verify_recurrence(sch, T)))
            out.append(CheckRecord("verify_bounded_product" + tag, params,
                                   float(np.max(L1 * sch.alphas(T))), 1.0,
                                   schedules.verify_bounded_product(sch, T)))
    return out


def deterministic_zoo(svm_certificate=None) -> list[Problem]:
    """Problems used by the deterministic sweeps; certifies the SVM instance if needed."""
    from . import zoo

    svm = zoo.make_svm(zoo.synthetic_svm())
    if svm_certificate is None:
        svm_certificate = zoo.certify_optimum(svm, "long-run", 20_000)
    return [
        zoo.make_lipschitz_norm(d=3, L=2.0),
        zoo.make_holder_power(d=2, L=1.0, v=1.0),
        zoo.make_holder_power(d=2, L=1.0, v=0.5),
        zoo.make_additive_composite(d=2, L_phi=1.0, v=1.0, L_h=2.0),
        zoo.make_quadratic_growth(d=3, r=1.0),
        zoo.make_constrained_quadratic(),
        svm.with_certificate(svm_certificate),
    ]


def shor_records(problems: list[Problem], horizons=(100, 10_000)) -> list[CheckRecord]:
    out = []
    for prob in problems:
        x0 = prob.initial_point()
        R = float(np.linalg.norm(x0 - prob.certificate.x_star))
        for T in horizons:
            for sch in (schedules.constant_step(R, T), schedules.harmonic(T)):
                trace = solvers.run_deterministic(prob, sch, T)
                rec = check_shor(trace, R, sch.alphas(T))
                rec.params.update(problem=prob.name, schedule=sch.kind)
                out.append(rec)
    return out


def exact_suite(svm_certificate=None) -> list[CheckRecord]:
    """Schedule algebra, per-step inequality, Shor, deterministic rates, quadratic upper bound, model sweeps."""
    from . import zoo

    records = schedule_algebra_records()
    problems = deterministic_zoo(svm_certificate)
    svm = problems[-1]

    for seed in range(3):
        trace = solvers.run_stochastic(svm, schedules.quad_regularized_svm(svm.meta["lam"]), 300, seed)
        records.append(check_lemma3_trace(svm, trace))

    records += shor_records(problems)

    for prob, theorem in ((zoo.make_holder_power(d=1, L=1.0, v=1.0), "C2"),
                          (zoo.make_holder_power(d=1, L=1.0, v=0.5), "C3"),
                          (zoo.make_additive_composite(d=1, L_phi=1.0, v=1.0, L_h=2.0), "C4")):
        for T in (100, 10_000):
            trace = solvers.run_deterministic(prob, schedules.constant_step(1.0, T), T)
            records.append(check_deterministic_rate(trace, prob, theorem))
    for prob in problems:
        T = 1000
        trace = solvers.run_deterministic(prob, schedules.harmonic(T), T)
        records.append(check_deterministic_rate(trace, prob, "T2"))

    quad = zoo.make_holder_power(d=1, L=1.0, v=1.0)
    box = ([-2.0], [2.0])
    records.append(check_prop1_forward(quad, 0.0, 2.0, box, 50))
    records.append(check_prop1_reverse(quad, 0.0, 2.0, box, 50))
    cloud = sample_feasible(svm, 1000, seed=11)
    m = svm.second_moment
    records.append(check_prop1_reverse(svm, m.L0, m.L1, points=cloud))

    for prob in problems:
        records.append(certify_growth(prob))
        records.append(certify_second_moment(prob))
        records.append(check_oracle_subgradients(prob))
    return records


def statistical_suite(num_seeds: int = 200, T: int = 10_000, svm_certificate=None) -> list[CheckRecord]:
    """Ensemble checks of the expectation bounds (mean + 3 SE against each bound)."""
    from . import zoo

    svm = zoo.make_svm(zoo.synthetic_svm())
    if svm_certificate is None:
        svm_certificate = zoo.certify_optimum(svm, "long-run", 20_000)
    svm = svm.with_certificate(svm_certificate)
    lam = svm.meta["lam"]
    m = svm.second_moment
    R = float(np.linalg.norm(svm.initial_point() - svm.certificate.x_star))
    quad = zoo.make_constrained_quadratic()
    Rq = float(np.linalg.norm(quad.initial_point() - quad.certificate.x_star))
    lip = zoo.make_lipschitz_norm(d=3, L=2.0)
    Rl = float(np.linalg.norm(lip.initial_point()))
    qg = zoo.make_quadratic_growth(d=3, r=1.0)
    return [
        stochastic_rate_record(lip, schedules.constant_step(Rl, T, L0=2.0), "T3", T, num_seeds),
        stochastic_rate_record(quad, schedules.constant_step(Rq, T, L0=quad.second_moment.L0), "T3", T, num_seeds),
        stochastic_rate_record(quad, schedules.classic_strongly_convex(quad.strong_convexity_mu), "T4", T, num_seeds),
        stochastic_rate_record(svm, schedules.constant_step(R, T, L0=m.L0, L1=m.L1), "T5", T, num_seeds),
        stochastic_rate_record(svm, schedules.extended_strongly_convex(lam, m.L1), "T6", T, num_seeds),
        stochastic_rate_record(svm, schedules.extended_strongly_convex(lam, m.L1), "T6-simple", T, num_seeds),
        stochastic_rate_record(svm, schedules.quad_regularized_svm(lam), "C5", T, num_seeds),
        stochastic_rate_record(qg, schedules.quadratic_growth(2.0, 4.0), "QG", T, num_seeds),
    ]
