"""Shared domain types: vectors, feasible regions, oracles, problems and run traces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Optional

import numpy as np


class ConfigurationError(ValueError):
    """Malformed input or a parameter set that does not fit the requested operation."""


class UnsupportedOperation(TypeError):
    """Operation requested on an object kind that cannot support it."""


class OracleError(ArithmeticError):
    """An oracle or objective returned a non-finite value."""


def as_vector(x, dim: Optional[int] = None) -> np.ndarray:
    """Return `x` as a finite 1-d float64 array (copy-free when possible)."""
    v = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if v.ndim != 1:
        raise ConfigurationError(f"expected a 1-d vector, got shape {v.shape}")
    if v.size == 0:
        raise ConfigurationError("vector must have dimension >= 1")
    if dim is not None and v.size != dim:
        raise ConfigurationError(f"dimension mismatch: expected {dim}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ConfigurationError("vector has non-finite components")
    return v


def fsum_vector(rows) -> np.ndarray:
    """Compensated column-wise sum of a 2-d array (or list of equal-length vectors)."""
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim == 1:
        return np.array([math.fsum(arr)])
    return np.array([math.fsum(col) for col in arr.T])


# ---------------------------------------------------------------------------
# feasible regions

REGION_KINDS = ("whole-space", "box", "ball", "halfspace", "orthant")


@dataclass(frozen=True)
class FeasibleRegion:
    """Closed convex set with a closed-form Euclidean projection.

    Use the classmethod constructors rather than building instances directly.
    A halfspace is ``{x : normal @ x <= offset}``.
    """

    kind: str
    dim: int
    lo: Optional[np.ndarray] = None
    hi: Optional[np.ndarray] = None
    center: Optional[np.ndarray] = None
    radius: Optional[float] = None
    normal: Optional[np.ndarray] = None
    offset: Optional[float] = None

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise ConfigurationError(f"unknown region kind {self.kind!r}")
        if self.dim < 1:
            raise ConfigurationError("region dimension must be >= 1")
        if self.kind == "box":
            if self.lo is None or self.hi is None or np.any(self.lo > self.hi):
                raise ConfigurationError("box requires lo <= hi componentwise")
        elif self.kind == "ball":
            if self.radius is None or not self.radius > 0:
                raise ConfigurationError("ball radius must be > 0")
        elif self.kind == "halfspace":
            if self.normal is None or not np.any(self.normal != 0):
                raise ConfigurationError("halfspace normal must be nonzero")

    @classmethod
    def whole_space(cls, dim: int) -> "FeasibleRegion":
        return cls("whole-space", int(dim))

    @classmethod
    def box(cls, lo, hi) -> "FeasibleRegion":
        lo = np.atleast_1d(np.asarray(lo, dtype=np.float64))
        hi = np.atleast_1d(np.asarray(hi, dtype=np.float64))
        lo, hi = np.broadcast_arrays(lo, hi)
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise ConfigurationError("box bounds must not be NaN")
        return cls("box", lo.size, lo=lo.copy(), hi=hi.copy())

    @classmethod
    def ball(cls, center, radius: float) -> "FeasibleRegion":
        c = as_vector(center)
        return cls("ball", c.size, center=c, radius=float(radius))

    @classmethod
    def halfspace(cls, normal, offset: float) -> "FeasibleRegion":
        a = as_vector(normal)
        return cls("halfspace", a.size, normal=a, offset=float(offset))

    @classmethod
    def orthant(cls, dim: int) -> "FeasibleRegion":
        return cls("orthant", int(dim))

    def project(self, x) -> np.ndarray:
        return project(self, x)

    def contains(self, x, tol: float = 1e-12) -> bool:
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "whole-space":
            return True
        if self.kind == "box":
            return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))
        if self.kind == "orthant":
            return bool(np.all(x >= -tol))
        if self.kind == "ball":
            return float(np.linalg.norm(x - self.center)) <= self.radius * (1 + tol) + tol
        return float(self.normal @ x) <= self.offset + tol * (1 + abs(self.offset))

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind, "dim": self.dim}
        for name in ("lo", "hi", "center", "normal"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val.tolist()
        for name in ("radius", "offset"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        return out


def project(region: FeasibleRegion, x) -> np.ndarray:
    """Euclidean projection of `x` onto `region`.

    Raises ConfigurationError on a dimension mismatch or non-finite input.
    """
    x = as_vector(x, region.dim)
    kind = region.kind
    if kind == "whole-space":
        return x
    if kind == "box":
        return np.minimum(np.maximum(x, region.lo), region.hi)
    if kind == "orthant":
        return np.maximum(x, 0.0)
    if kind == "ball":
        diff = x - region.center
        dist = float(np.linalg.norm(diff))
        if dist <= region.radius:
            return x
        return region.center + diff * (region.radius / dist)
    # halfspace
    a = region.normal
    excess = float(a @ x) - region.offset
    if excess <= 0:
        return x
    return x - (excess / float(a @ a)) * a


# ---------------------------------------------------------------------------
# oracles


@dataclass(frozen=True)
class StochasticOracle:
    """Unbiased stochastic subgradient estimator ``g(x; xi)``.

    For a finite-uniform sample space, ``num_samples`` is set and xi is an
    index in ``range(num_samples)``; ``estimator(x, i)`` returns the i-th
    estimate. For a custom sample space, ``sampler(rng)`` draws xi and
    ``estimator(x, xi)`` consumes it.
    """

    estimator: Callable[[np.ndarray, Any], np.ndarray]
    num_samples: Optional[int] = None
    sampler: Optional[Callable[[np.random.Generator], Any]] = None
    rng_seed: Optional[int] = None
    # optional vectorized form: x -> (n, d) array of all estimates
    all_estimates: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.num_samples is None and self.sampler is None:
            raise ConfigurationError("stochastic oracle needs num_samples or a sampler")
        if self.num_samples is not None and self.num_samples < 1:
            raise ConfigurationError("finite sample space must have n >= 1")

    @property
    def is_finite(self) -> bool:
        return self.num_samples is not None

    @property
    def sample_space(self) -> str:
        return f"finite-uniform({self.num_samples})" if self.is_finite else "custom-seeded"

    def estimates(self, x) -> np.ndarray:
        """All n estimates at `x`, stacked row-wise (finite sample spaces only)."""
        if not self.is_finite:
            raise UnsupportedOperation("estimates() needs a finite sample space")
        if self.all_estimates is not None:
            return np.asarray(self.all_estimates(x), dtype=np.float64)
        return np.array([self.estimator(x, i) for i in range(self.num_samples)], dtype=np.float64)


def deterministic_as_stochastic(oracle: Callable[[np.ndarray], np.ndarray]) -> StochasticOracle:
    """Wrap a deterministic oracle as a finite-uniform(1) stochastic oracle."""
    return StochasticOracle(
        estimator=lambda x, i: oracle(x),
        num_samples=1,
        all_estimates=lambda x: np.asarray(oracle(x), dtype=np.float64)[None, :],
    )


def exact_expectation(oracle: StochasticOracle, x, functional: Optional[Callable] = None):
    """Exact mean of ``functional(estimator(x, i))`` over a finite-uniform sample space.

    `functional` defaults to the identity, in which case the mean estimate
    (a vector) is returned. Scalar and vector functionals are both summed
    with compensated summation.
    """
    if not oracle.is_finite:
        raise UnsupportedOperation("exact_expectation requires a finite-uniform sample space")
    n = oracle.num_samples
    x = np.asarray(x, dtype=np.float64)
    if functional is None:
        ests = oracle.estimates(x)
        return fsum_vector(ests) / n
    values = [functional(np.asarray(oracle.estimator(x, i), dtype=np.float64)) for i in range(n)]
    first = np.asarray(values[0])
    if first.ndim == 0:
        return math.fsum(float(v) for v in values) / n
    return fsum_vector(values) / n


# ---------------------------------------------------------------------------
# certificates and problems


@dataclass(frozen=True)
class OptimumCertificate:
    """A (possibly approximate) minimizer and optimal value.

    ``residual`` bounds ``f(x_star) - f*`` when the method can certify one;
    ``low_confidence`` marks certificates that missed their residual target.
    """

    x_star: np.ndarray
    f_star: float
    project_onto_x_star: Optional[Callable[[np.ndarray], np.ndarray]] = None
    method: str = "exact"
    residual: float = 0.0
    low_confidence: bool = False
    seed: Optional[int] = None

    def validate(self, objective: Callable, region: FeasibleRegion, rel_tol: float = 1e-12) -> None:
        if not region.contains(self.x_star):
            raise ConfigurationError("certificate x_star is infeasible")
        fx = float(objective(self.x_star))
        if abs(fx - self.f_star) > rel_tol * max(1.0, abs(self.f_star)):
            raise ConfigurationError(
                f"objective at x_star ({fx!r}) disagrees with f_star ({self.f_star!r})"
            )

    def dist_to_solution_set(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        if self.project_onto_x_star is not None:
            return float(np.linalg.norm(x - self.project_onto_x_star(x)))
        return float(np.linalg.norm(x - self.x_star))

    def to_dict(self) -> dict:
        return {
            "x_star": np.asarray(self.x_star).tolist(),
            "f_star": self.f_star,
            "method": self.method,
            "residual": self.residual,
            "low_confidence": self.low_confidence,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Problem:
    """Convex minimization of `objective` over `region` with oracle access.

    Optional fields carry what the rate theorems need: a certificate for
    ``f*``, curvature constants, the second-moment model ``(L0, L1)`` and a
    growth envelope. ``meta`` holds family-specific constants.
    """

    dimension: int
    objective: Callable[[np.ndarray], float]
    region: FeasibleRegion
    oracle: Callable[[np.ndarray], np.ndarray]
    stochastic_oracle: Optional[StochasticOracle] = None
    certificate: Optional[OptimumCertificate] = None
    strong_convexity_mu: Optional[float] = None
    quadratic_growth_mu: Optional[float] = None
    second_moment: Any = None  # bounds.SecondMomentModel
    growth_model: Any = None  # bounds.GrowthModel
    start: Optional[np.ndarray] = None
    name: str = "problem"
    meta: dict = field(default_factory=dict)
    # x -> (candidate point, certified lower bound on f*); used by certify_optimum
    lower_bound: Optional[Callable[[np.ndarray], tuple]] = None

    def __post_init__(self):
        if self.region.dim != self.dimension:
            raise ConfigurationError("region dimension does not match problem dimension")
        for name in ("strong_convexity_mu", "quadratic_growth_mu"):
            val = getattr(self, name)
            if val is not None and val < 0:
                raise ConfigurationError(f"{name} must be >= 0")

    def with_certificate(self, certificate: OptimumCertificate) -> "Problem":
        return replace(self, certificate=certificate)

    def initial_point(self, x0=None) -> np.ndarray:
        """Configured start, else the projection of the origin, made feasible."""
        if x0 is None:
            x0 = self.start if self.start is not None else np.zeros(self.dimension)
        return project(self.region, as_vector(x0, self.dimension))

    def gap(self, x) -> float:
        if self.certificate is None:
            raise ConfigurationError(f"problem {self.name!r} has no optimum certificate")
        return float(self.objective(x)) - self.certificate.f_star


def subgradient_inequality_check(problem: Problem, x, g, probe_points: Iterable) -> bool:
    """True iff ``f(y) >= f(x) + g @ (y - x) - 1e-9 (1 + |f(y)|)`` at every probe."""
    x = np.asarray(x, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    fx = float(problem.objective(x))
    for y in probe_points:
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        fy = float(problem.objective(y))
        if fy < fx + float(g @ (y - x)) - 1e-9 * (1 + abs(fy)):
            return False
    return True


# ---------------------------------------------------------------------------
# run traces


@dataclass
class RunTrace:
    """Record of one solver run.

    ``iterates`` is a ``(num_iterates, d)`` array, or None when the run
    exceeded the storage cap; in that case ``running_sums`` holds
    ``rule -> (weighted vector sum, total weight)`` and ``best_point`` the
    best-so-far iterate.
    """

    horizon: int
    dimension: int
    iterates: Optional[np.ndarray]
    step_sizes: np.ndarray
    objective_values: Optional[np.ndarray] = None
    objective_gaps: Optional[np.ndarray] = None
    hyperplane_distances: Optional[np.ndarray] = None
    samples: Optional[np.ndarray] = None
    seed: Optional[int] = None
    terminated_at_minimizer: Optional[int] = None
    stochastic: bool = False
    running_sums: Optional[dict] = None
    best_point: Optional[np.ndarray] = None
    minimizer_residual: Optional[float] = None

    @property
    def num_iterates(self) -> int:
        if self.iterates is not None:
            return self.iterates.shape[0]
        return len(self.step_sizes) + (0 if self.terminated_at_minimizer is not None else 1)

    def min_gap(self) -> float:
        """Smallest objective gap over x_0..x_T (the iterates the rate theorems range over)."""
        if self.objective_gaps is None:
            raise ConfigurationError("trace carries no objective gaps (no certificate)")
        return float(np.min(self.objective_gaps[: self.horizon + 1]))
