import math

import numpy as np
import pytest

from subgradkit import bounds, schedules
from subgradkit.bounds import UNBOUNDED, fit_rate_exponent, growth_eval, shor_rhs, theorem_rhs
from subgradkit.core import ConfigurationError


def test_growth_eval_examples():
    assert growth_eval(bounds.power_growth(2.0, 1.0), 3.0) == 9.0
    assert growth_eval(bounds.linear_growth(5.0), 0.2) == 1.0
    assert growth_eval(bounds.composite_growth(1.0, 1.0, 2.0), 1.0) == 4.5


def test_growth_eval_rejects_negative_t():
    with pytest.raises(ConfigurationError):
        growth_eval(bounds.linear_growth(1.0), -0.1)


def test_table_growth_rounds_up_and_goes_unbounded():
    tab = bounds.table_growth([0.0, 1.0, 2.0], [0.0, 1.0, 5.0])
    assert tab(0.0) == 0.0
    assert tab(0.5) == 1.0
    assert tab(2.0) == 5.0
    assert tab(2.5) is UNBOUNDED
    assert bounds.is_nondecreasing(tab, 3.0)


def test_growth_model_validation():
    with pytest.raises(ConfigurationError):
        bounds.power_growth(1.0, 1.5)
    with pytest.raises(ConfigurationError):
        bounds.table_growth([0.0, 0.0], [1.0, 2.0])
    with pytest.raises(ConfigurationError):
        bounds.SecondMomentModel(-1.0, 0.0)


def test_shor_rhs_examples():
    assert shor_rhs(1.0, [1.0]) == 1.0
    assert shor_rhs(1.0, [1.0, 1.0]) == 0.75
    assert shor_rhs(1.0, np.full(100, 0.1)) == pytest.approx(0.1, rel=1e-12)


def test_theorem_rhs_examples():
    assert theorem_rhs("C2", L=1.0, R=1.0, T=0) == 0.5
    assert theorem_rhs("T4", L=1.0, mu=1.0, T=0) == 1.0
    assert theorem_rhs("T6-simple", L0=1.0, L1=0.0, mu=1.0, R=1.0, T=0) == 2.0


def test_theorem_rhs_T5_equals_T3_without_L1():
    alphas = [0.3, 0.1, 0.7, 0.2]
    t3 = theorem_rhs("T3", R=2.0, L=1.5, alphas=alphas)
    t5 = theorem_rhs("T5", R=2.0, L0=1.5, L1=0.0, alphas=alphas)
    assert t5 == pytest.approx(t3, rel=1e-12)


def test_theorem_rhs_hand_values():
    # C3: 1 * 1 / (1.5 * 100^0.75)
    assert theorem_rhs("C3", L=1.0, R=1.0, T=99, v=0.5) == pytest.approx(1 / (1.5 * 100**0.75), rel=1e-14)
    # C4 at v = 1: L_phi R^2 / (2 (T+1)) + 2 L_h R / sqrt(T+1)
    assert theorem_rhs("C4", L_phi=1.0, L_h=2.0, R=1.0, T=99, v=1.0) == pytest.approx(0.005 + 0.4, rel=1e-14)
    # C5 at T = 0: 24 L^2 / (2 lam) + 36 lam R^2 / 2
    assert theorem_rhs("C5", L=1.0, lam=0.5, R=1.0, T=0) == pytest.approx(24 + 9, rel=1e-14)
    # T2 with linear growth: L * shor_rhs
    g = bounds.linear_growth(3.0)
    assert theorem_rhs("T2", R=1.0, alphas=[1.0, 1.0], growth=g) == 2.25


def test_theorem_rhs_T6_and_QG_single_step():
    # T = 0, alpha_0 = a: T6 = (2 L0^2 + L1^2 R^2 / 2) / (mu (2 - L1 a))
    a, L0, L1, mu, R = 0.25, 1.0, 2.0, 1.0, 3.0
    assert theorem_rhs("T6", R=R, L0=L0, L1=L1, mu=mu, alphas=[a]) == pytest.approx(
        (2 * L0**2 + L1**2 * R**2 / 2) / (mu * (2 - L1 * a)), rel=1e-14)
    assert theorem_rhs("QG", R=R, L0=L0, L1=L1, mu=mu, alphas=[a]) == pytest.approx(
        (4 * L0**2 + L1**2 * R**2) / (mu * (1 - L1 * a)), rel=1e-14)


def test_theorem_rhs_from_schedule():
    sch = schedules.extended_strongly_convex(1.0, 2.0)
    direct = theorem_rhs("T6", R=1.0, L0=1.0, L1=2.0, mu=1.0, alphas=sch.alphas(10))
    assert theorem_rhs("T6", schedule=sch, T=10, R=1.0, L0=1.0, mu=1.0) == direct


def test_theorem_rhs_preconditions():
    with pytest.raises(ConfigurationError, match="precondition"):
        theorem_rhs("T5", R=1.0, L0=1.0, L1=4.0, alphas=[0.5])
    with pytest.raises(ConfigurationError, match="precondition"):
        theorem_rhs("QG", R=1.0, L0=1.0, L1=2.0, mu=1.0, alphas=[0.5])
    with pytest.raises(ConfigurationError, match="missing"):
        theorem_rhs("C2", L=1.0, T=3)
    with pytest.raises(ConfigurationError, match="unknown theorem"):
        theorem_rhs("T9")


@pytest.mark.parametrize("p", [1.0, 0.5, 0.75])
def test_fit_rate_exponent_exact_power_laws(p):
    series = [(T, 3.0 / T**p) for T in (10, 100, 1000)]
    assert fit_rate_exponent(series) == pytest.approx(-p, abs=1e-12)


def test_fit_rate_exponent_uses_top_decade():
    # transient at small T is ignored once the top decade has three points
    series = [(1, 1e-9), (2, 1.0)] + [(T, 1.0 / T) for T in (1000, 3000, 10_000)]
    assert fit_rate_exponent(series) == pytest.approx(-1.0, abs=1e-12)


def test_fit_rate_exponent_needs_three_positive_points():
    with pytest.raises(ConfigurationError):
        fit_rate_exponent([(10, 0.1), (100, 0.0), (1000, 0.001)])
