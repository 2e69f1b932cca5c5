"""Step-size schedules ``k -> alpha_k`` for the normalized and stochastic methods."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import ConfigurationError, UnsupportedOperation

SCHEDULE_KINDS = (
    "constant-horizon",
    "classic-strongly-convex",
    "extended-strongly-convex",
    "quadratic-growth",
    "quad-regularized-svm",
    "user-sequence",
)

_REQUIRED = {
    "constant-horizon": ("R", "T"),
    "classic-strongly-convex": ("mu",),
    "extended-strongly-convex": ("mu", "L1"),
    "quadratic-growth": ("mu", "L1"),
    "quad-regularized-svm": ("lam",),
    "user-sequence": ("explicit",),
}


@dataclass(frozen=True)
class StepSchedule:
    """A step-size rule.

    ``stochastic`` selects the stochastic constant step ``R / (L0 sqrt(T+1))``
    instead of the normalized-method step ``R / sqrt(T+1)``. When ``L1`` is
    given for a constant-horizon schedule, construction checks
    ``L1 * alpha < 2``.
    """

    kind: str
    R: Optional[float] = None
    T: Optional[int] = None
    mu: Optional[float] = None
    L0: Optional[float] = None
    L1: Optional[float] = None
    lam: Optional[float] = None
    explicit: Optional[tuple] = None
    stochastic: bool = False

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ConfigurationError(f"unknown schedule kind {self.kind!r}")
        for name in _REQUIRED[self.kind]:
            if getattr(self, name) is None:
                raise ConfigurationError(f"schedule {self.kind!r} requires parameter {name!r}")
        if self.kind == "constant-horizon":
            if not self.R > 0:
                raise ConfigurationError("R must be > 0")
            if self.T < 0:
                raise ConfigurationError("horizon T must be >= 0")
            if self.stochastic and not (self.L0 is not None and self.L0 > 0):
                raise ConfigurationError("stochastic constant step requires L0 > 0")
            if self.L1 is not None and self.L1 * self.step(0) >= 2:
                raise ConfigurationError(
                    f"L1 * alpha = {self.L1 * self.step(0):.6g} >= 2; increase the horizon T"
                )
        for name in ("mu", "lam"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ConfigurationError(f"{name} must be > 0")
        for name in ("L0", "L1"):
            val = getattr(self, name)
            if val is not None and val < 0:
                raise ConfigurationError(f"{name} must be >= 0")
        if self.kind == "user-sequence":
            if len(self.explicit) == 0 or any(not a > 0 for a in self.explicit):
                raise ConfigurationError("user sequence must be a nonempty positive sequence")

    def step(self, k: int) -> float:
        if k < 0:
            raise ConfigurationError("iteration index must be >= 0")
        kind = self.kind
        if kind == "constant-horizon":
            if self.stochastic:
                return self.R / (self.L0 * math.sqrt(self.T + 1))
            return self.R / math.sqrt(self.T + 1)
        if kind == "classic-strongly-convex":
            return 2.0 / (self.mu * (k + 2))
        if kind == "extended-strongly-convex":
            return 2.0 / (self.mu * (k + 2) + self.L1**2 / (self.mu * (k + 1)))
        if kind == "quadratic-growth":
            return 4.0 / (self.mu * (k + 2) + 4 * self.L1**2 / (self.mu * (k + 1)))
        if kind == "quad-regularized-svm":
            return 2.0 / (self.lam * (k + 2) + 36 * self.lam / (k + 1))
        if k >= len(self.explicit):
            raise ConfigurationError(f"user sequence has no entry for k={k}")
        return float(self.explicit[k])

    def alphas(self, T: int) -> np.ndarray:
        """alpha_0..alpha_T as an array."""
        return np.array([self.step(k) for k in range(T + 1)], dtype=np.float64)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for name in ("R", "T", "mu", "L0", "L1", "lam"):
            val = getattr(self, name)
            if val is not None:
                out[name] = val
        if self.explicit is not None:
            out["explicit"] = list(self.explicit)
        if self.stochastic:
            out["stochastic"] = True
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "StepSchedule":
        data = dict(data)
        if "explicit" in data and data["explicit"] is not None:
            data["explicit"] = tuple(float(a) for a in data["explicit"])
        return cls(**data)


def step(schedule: StepSchedule, k: int) -> float:
    return schedule.step(k)


def constant_step(R: float, T: int, L0: Optional[float] = None, L1: Optional[float] = None) -> StepSchedule:
    """R/sqrt(T+1), or R/(L0 sqrt(T+1)) when L0 is given (stochastic form)."""
    return StepSchedule("constant-horizon", R=R, T=T, L0=L0, L1=L1, stochastic=L0 is not None)


def classic_strongly_convex(mu: float) -> StepSchedule:
    return StepSchedule("classic-strongly-convex", mu=mu)


def extended_strongly_convex(mu: float, L1: float) -> StepSchedule:
    return StepSchedule("extended-strongly-convex", mu=mu, L1=L1)


def quadratic_growth(mu: float, L1: float) -> StepSchedule:
    return StepSchedule("quadratic-growth", mu=mu, L1=L1)


def quad_regularized_svm(lam: float) -> StepSchedule:
    return StepSchedule("quad-regularized-svm", lam=lam)


def user_sequence(alphas: Sequence[float]) -> StepSchedule:
    return StepSchedule("user-sequence", explicit=tuple(float(a) for a in alphas))


def harmonic(T: int, scale: float = 1.0) -> StepSchedule:
    """User sequence alpha_k = scale/(k+1) for k = 0..T."""
    return user_sequence([scale / (k + 1) for k in range(T + 1)])


def _recurrence_shift(schedule: StepSchedule) -> float:
    if schedule.kind == "extended-strongly-convex":
        return schedule.mu
    if schedule.kind == "quadratic-growth":
        return schedule.mu / 2
    raise UnsupportedOperation(
        f"recurrence checks apply to extended-strongly-convex or quadratic-growth, not {schedule.kind!r}"
    )


def verify_recurrence(schedule: StepSchedule, horizon: int, rel_tol: float = 1e-10) -> bool:
    """Check ``(k+1)/alpha_k == (k+2)(1/alpha_{k+1} - shift)`` for 0 <= k < horizon.

    The shift is mu for the extended strongly convex schedule and mu/2 for
    the quadratic-growth schedule.
    """
    shift = _recurrence_shift(schedule)
    for k in range(horizon):
        lhs = (k + 1) / schedule.step(k)
        rhs = (k + 2) * (1.0 / schedule.step(k + 1) - shift)
        if abs(lhs - rhs) > rel_tol * max(abs(lhs), abs(rhs)):
            return False
    return True


def verify_bounded_product(schedule: StepSchedule, horizon: int) -> bool:
    """L1*alpha_k <= 1 (extended strongly convex) or < 1 (quadratic growth) for 0 <= k <= horizon."""
    _recurrence_shift(schedule)
    L1 = schedule.L1
    strict = schedule.kind == "quadratic-growth"
    for k in range(horizon + 1):
        prod = L1 * schedule.step(k)
        if prod > 1 or (strict and prod == 1):
            return False
    return True
