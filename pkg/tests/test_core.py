import numpy as np
import pytest

from subgradkit.core import (
    ConfigurationError,
    FeasibleRegion,
    OptimumCertificate,
    StochasticOracle,
    UnsupportedOperation,
    exact_expectation,
    project,
    subgradient_inequality_check,
)

from conftest import scalar_problem


def test_project_whole_space_is_identity():
    np.testing.assert_array_equal(project(FeasibleRegion.whole_space(2), [3, 4]), [3, 4])


def test_project_ball_scales_radially():
    out = project(FeasibleRegion.ball([0, 0], 1.0), [3, 4])
    np.testing.assert_allclose(out, [0.6, 0.8], rtol=0, atol=1e-15)


def test_project_box_clamps():
    region = FeasibleRegion.box([0, 0, 0], [1, 1, 1])
    np.testing.assert_array_equal(project(region, [-2, 0.5, 7]), [0, 0.5, 1])


def test_project_halfspace_and_orthant():
    hs = FeasibleRegion.halfspace([1.0, 1.0], 1.0)
    np.testing.assert_allclose(project(hs, [2.0, 2.0]), [0.5, 0.5])
    np.testing.assert_array_equal(project(hs, [0.0, 0.0]), [0.0, 0.0])
    np.testing.assert_array_equal(project(FeasibleRegion.orthant(3), [-1, 2, -0.0]), [0, 2, 0])


def test_project_dimension_mismatch():
    with pytest.raises(ConfigurationError):
        project(FeasibleRegion.whole_space(2), [1.0, 2.0, 3.0])


@pytest.mark.parametrize("make", [
    lambda: FeasibleRegion.box([1.0], [0.0]),
    lambda: FeasibleRegion.ball([0.0], 0.0),
    lambda: FeasibleRegion.halfspace([0.0, 0.0], 1.0),
])
def test_degenerate_regions_rejected(make):
    with pytest.raises(ConfigurationError):
        make()


def _abs_problem():
    return scalar_problem(lambda x: abs(x[0]), lambda x: np.sign(x))


@pytest.mark.parametrize("x, g, probes, expected", [
    (1.0, 1.0, [-2.0, 0.0, 3.0], True),
    (0.0, 0.5, [-1.0, 1.0], True),
    # g = 2 is not in [-1, 1], but the probe -1 cannot see it: f(-1) = 1 >= 2 * (-1)
    (0.0, 2.0, [-1.0], True),
    (0.0, 2.0, [1.0], False),
    (0.0, 2.0, [-1.0, 0.5], False),
])
def test_subgradient_inequality_abs(x, g, probes, expected):
    assert subgradient_inequality_check(_abs_problem(), [x], [g], probes) is expected


def test_subgradient_inequality_flags_wrong_sign():
    # g = -2 at 0: probe -1 gives f(-1) = 1 < 0 + (-2)(-1) = 2
    assert not subgradient_inequality_check(_abs_problem(), [0.0], [-2.0], [-1.0])


def test_exact_expectation_examples():
    axes = StochasticOracle(lambda x, i: np.eye(2)[i], num_samples=2)
    assert exact_expectation(axes, np.zeros(2), lambda g: float(g @ g)) == 1.0
    np.testing.assert_array_equal(exact_expectation(axes, np.zeros(2)), [0.5, 0.5])

    single = StochasticOracle(lambda x, i: np.array([7.0]), num_samples=1)
    assert exact_expectation(single, np.zeros(1), lambda g: float(g[0] ** 2)) == 49.0

    three = StochasticOracle(lambda x, i: np.array([float(i + 1)]), num_samples=3)
    assert exact_expectation(three, np.zeros(1), lambda g: float(g[0])) == 2.0


def test_exact_expectation_needs_finite_space():
    custom = StochasticOracle(lambda x, xi: x * xi, sampler=lambda rng: rng.standard_normal())
    with pytest.raises(UnsupportedOperation):
        exact_expectation(custom, np.zeros(1))


def test_oracle_requires_sample_space():
    with pytest.raises(ConfigurationError):
        StochasticOracle(lambda x, i: x)


def test_certificate_validation():
    region = FeasibleRegion.box([0.0], [1.0])
    f = lambda x: float((x[0] - 2) ** 2)
    OptimumCertificate(np.array([1.0]), 1.0).validate(f, region)
    with pytest.raises(ConfigurationError):
        OptimumCertificate(np.array([1.0]), 0.5).validate(f, region)
    with pytest.raises(ConfigurationError):
        OptimumCertificate(np.array([2.0]), 0.0).validate(f, region)


def test_problem_default_start_is_projected_origin():
    prob = scalar_problem(lambda x: x[0], lambda x: 1.0, region=FeasibleRegion.box([1.0], [2.0]))
    np.testing.assert_array_equal(prob.initial_point(), [1.0])
    with pytest.raises(ConfigurationError):
        prob.gap([1.0])
