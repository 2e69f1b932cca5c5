"""Growth envelopes, second-moment models, and closed-form rate bounds.

Theorem identifiers accepted by :func:`theorem_rhs`:

=========  ==================================================================
``T2``     growth envelope evaluated at the hyperplane-distance bound
``C2``     ``L R^2 / (2(T+1))`` (Lipschitz-gradient growth, constant step)
``C3``     ``L R^(v+1) / ((v+1)(T+1)^((v+1)/2))`` (Hölder growth)
``C4``     C3 term for Phi plus ``2 L_h R / sqrt(T+1)``
``T3``     classic stochastic rate, ``E||g||^2 <= L^2``
``T4``     classic strongly convex rate ``2L^2 / (mu(T+2))``
``T5``     extended stochastic rate under ``(L0, L1)``
``T6``     extended strongly convex rate, ``(k+1)(2 - L1 alpha_k)`` weights
``T6-simple`` same, plain ``(k+1)`` weights
``C5``     quadratically regularized rate ``24L^2/(lam(T+2)) + 36 lam R^2/((T+1)(T+2))``
``QG``     quadratic-growth rate, ``(k+1)(1 - L1 alpha_k)`` weights
=========  ==================================================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import ConfigurationError


class _Unbounded:
    """Sentinel for an envelope value beyond the tabulated range."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()

GROWTH_KINDS = ("linear", "power", "composite", "table")


@dataclass(frozen=True)
class GrowthModel:
    """Nondecreasing envelope D with ``f(x) - f* <= D(||x - x*||)``.

    linear: ``L t``; power: ``L t^(v+1)/(v+1)``; composite:
    ``L_phi t^(v+1)/(v+1) + 2 L_h t``; table: step-up interpolation of
    ``(grid, values)``, UNBOUNDED past the last grid point.
    """

    kind: str
    L: float = 0.0
    v: float = 1.0
    L_h: float = 0.0
    grid: Optional[tuple] = None
    values: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in GROWTH_KINDS:
            raise ConfigurationError(f"unknown growth model kind {self.kind!r}")
        if self.L < 0 or self.L_h < 0:
            raise ConfigurationError("growth constants must be >= 0")
        if self.kind in ("power", "composite") and not (0 < self.v <= 1):
            raise ConfigurationError("Hölder exponent v must lie in (0, 1]")
        if self.kind == "table":
            if self.grid is None or self.values is None or len(self.grid) != len(self.values):
                raise ConfigurationError("table growth model needs equal-length grid and values")
            if len(self.grid) == 0 or self.grid[0] != 0:
                raise ConfigurationError("table grid must start at t = 0")
            if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
                raise ConfigurationError("table grid must be strictly increasing")

    def __call__(self, t: float):
        return growth_eval(self, t)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "L": self.L, "v": self.v, "L_h": self.L_h}
        if self.kind == "table":
            out.update(grid=list(self.grid), values=list(self.values))
        return out


def linear_growth(L: float) -> GrowthModel:
    return GrowthModel("linear", L=L)


def power_growth(L: float, v: float) -> GrowthModel:
    return GrowthModel("power", L=L, v=v)


def composite_growth(L_phi: float, v: float, L_h: float) -> GrowthModel:
    return GrowthModel("composite", L=L_phi, v=v, L_h=L_h)


def table_growth(grid: Sequence[float], values: Sequence[float]) -> GrowthModel:
    return GrowthModel("table", grid=tuple(map(float, grid)), values=tuple(map(float, values)))


def growth_eval(model: GrowthModel, t: float):
    if t < 0:
        raise ConfigurationError(f"growth envelope is defined for t >= 0, got {t}")
    kind = model.kind
    if kind == "linear":
        return model.L * t
    if kind == "power":
        return model.L * t ** (model.v + 1) / (model.v + 1)
    if kind == "composite":
        return model.L * t ** (model.v + 1) / (model.v + 1) + 2 * model.L_h * t
    grid = model.grid
    if t > grid[-1]:
        return UNBOUNDED
    # smallest grid point >= t keeps the envelope an upper bound
    idx = int(np.searchsorted(grid, t, side="left"))
    return model.values[idx]


def is_nondecreasing(model: GrowthModel, t_max: float, num: int = 1000) -> bool:
    ts = np.linspace(0.0, t_max, num)
    vals = [growth_eval(model, float(t)) for t in ts]
    if vals[0] is not UNBOUNDED and vals[0] < 0:
        return False
    prev = vals[0]
    for val in vals[1:]:
        if prev is UNBOUNDED and val is not UNBOUNDED:
            return False
        if val is not UNBOUNDED and prev is not UNBOUNDED and val < prev:
            return False
        prev = val
    return True


@dataclass(frozen=True)
class SecondMomentModel:
    """``E||g(x; xi)||^2 <= L0^2 + L1 (f(x) - f*)``."""

    L0: float
    L1: float

    def __post_init__(self):
        if self.L0 < 0 or self.L1 < 0:
            raise ConfigurationError("second-moment constants must be >= 0")

    def bound(self, gap: float) -> float:
        return self.L0**2 + self.L1 * gap

    def to_dict(self) -> dict:
        return {"L0": self.L0, "L1": self.L1}


# ---------------------------------------------------------------------------
# closed-form right-hand sides


def _alphas(alphas) -> np.ndarray:
    a = np.asarray(alphas, dtype=np.float64).ravel()
    if a.size == 0:
        raise ConfigurationError("step-size sequence is empty")
    if np.any(a <= 0):
        raise ConfigurationError("step sizes must be positive")
    return a


def shor_rhs(R: float, alphas) -> float:
    """(R^2 + sum alpha_k^2) / (2 sum alpha_k)."""
    a = _alphas(alphas)
    return (R**2 + math.fsum(a * a)) / (2 * math.fsum(a))


THEOREMS = ("T2", "C2", "C3", "C4", "T3", "T4", "T5", "T6", "T6-simple", "C5", "QG")


def _need(params: dict, *names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise ConfigurationError(f"missing parameter(s) {', '.join(missing)}")
    return [params[n] for n in names]


def theorem_rhs(theorem: str, *, schedule=None, **params) -> float:
    """Right-hand side of a rate theorem.

    Parameters are passed by name: ``R`` (exact distance to the reference
    minimizer, or to the solution set for ``QG``), ``T``, ``alphas`` (or a
    ``schedule`` from which alpha_0..alpha_T are taken), ``L``, ``L0``,
    ``L1``, ``mu``, ``lam``, ``v``, ``L_phi``, ``L_h`` and ``growth`` as the
    theorem requires.
    """
    if theorem not in THEOREMS:
        raise ConfigurationError(f"unknown theorem identifier {theorem!r}")
    if schedule is not None and params.get("alphas") is None:
        T = _need(params, "T")[0]
        params["alphas"] = schedule.alphas(T)
        if params.get("L1") is None and schedule.L1 is not None:
            params["L1"] = schedule.L1

    if theorem == "T2":
        R, alphas, growth = _need(params, "R", "alphas", "growth")
        return growth_eval(growth, shor_rhs(R, alphas))
    if theorem == "C2":
        L, R, T = _need(params, "L", "R", "T")
        return L * R**2 / (2 * (T + 1))
    if theorem == "C3":
        L, R, T, v = _need(params, "L", "R", "T", "v")
        return L * R ** (v + 1) / ((v + 1) * (T + 1) ** ((v + 1) / 2))
    if theorem == "C4":
        L_phi, L_h, R, T, v = _need(params, "L_phi", "L_h", "R", "T", "v")
        return L_phi * R ** (v + 1) / ((v + 1) * (T + 1) ** ((v + 1) / 2)) + 2 * L_h * R / math.sqrt(T + 1)
    if theorem == "T3":
        R, L, alphas = _need(params, "R", "L", "alphas")
        a = _alphas(alphas)
        return (R**2 + L**2 * math.fsum(a * a)) / (2 * math.fsum(a))
    if theorem == "T4":
        L, mu, T = _need(params, "L", "mu", "T")
        return 2 * L**2 / (mu * (T + 2))
    if theorem == "T5":
        R, L0, L1, alphas = _need(params, "R", "L0", "L1", "alphas")
        a = _alphas(alphas)
        denom = math.fsum(a * (2 - L1 * a))
        if np.any(L1 * a >= 2) or denom <= 0:
            raise ConfigurationError("precondition violated: requires L1 * alpha_k < 2 for all k")
        return (R**2 + L0**2 * math.fsum(a * a)) / denom
    if theorem == "T6":
        R, L0, L1, mu, alphas = _need(params, "R", "L0", "L1", "mu", "alphas")
        a = _alphas(alphas)
        T = a.size - 1
        k1 = np.arange(1, T + 2, dtype=np.float64)
        denom = mu * math.fsum(k1 * (2 - L1 * a))
        if np.any(L1 * a >= 2) or denom <= 0:
            raise ConfigurationError("precondition violated: requires L1 * alpha_k < 2 for all k")
        return (2 * L0**2 * (T + 1) + L1**2 * R**2 / 2) / denom
    if theorem == "T6-simple":
        R, L0, L1, mu, T = _need(params, "R", "L0", "L1", "mu", "T")
        return 4 * L0**2 / (mu * (T + 2)) + L1**2 * R**2 / (mu * (T + 1) * (T + 2))
    if theorem == "C5":
        L, lam, R, T = _need(params, "L", "lam", "R", "T")
        return 24 * L**2 / (lam * (T + 2)) + 36 * lam * R**2 / ((T + 1) * (T + 2))
    # QG
    R, L0, L1, mu, alphas = _need(params, "R", "L0", "L1", "mu", "alphas")
    a = _alphas(alphas)
    T = a.size - 1
    k1 = np.arange(1, T + 2, dtype=np.float64)
    denom = mu * math.fsum(k1 * (1 - L1 * a))
    if np.any(L1 * a >= 1) or denom <= 0:
        raise ConfigurationError("precondition violated: requires L1 * alpha_k < 1 for all k")
    return (4 * L0**2 * (T + 1) + L1**2 * R**2) / denom


def fit_rate_exponent(gap_series) -> float:
    """Least-squares slope of log(gap) against log(T).

    Nonpositive gaps are dropped. With more than three points, only the
    largest decade of T is used, provided it still holds three points.
    """
    pts = [(float(T), float(g)) for T, g in gap_series if g > 0 and T > 0]
    if len(pts) < 3:
        raise ConfigurationError("need at least 3 positive (T, gap) points to fit a rate")
    if len(pts) > 3:
        t_max = max(T for T, _ in pts)
        top = [(T, g) for T, g in pts if T >= t_max / 10]
        if len(top) >= 3:
            pts = top
    logT = np.log([T for T, _ in pts])
    logg = np.log([g for _, g in pts])
    slope, _ = np.polyfit(logT, logg, 1)
    return float(slope)
