import numpy as np
import pytest

from subgradkit import zoo
from subgradkit.core import FeasibleRegion, OptimumCertificate, Problem, deterministic_as_stochastic


def scalar_problem(f, g, region=None, x_star=None, f_star=None, **kw):
    """1-d problem from plain callables, with an optional exact certificate."""
    region = region or FeasibleRegion.whole_space(1)
    cert = None
    if x_star is not None:
        cert = OptimumCertificate(np.atleast_1d(np.asarray(x_star, float)), float(f_star))
    grad = lambda x: np.atleast_1d(np.asarray(g(x), float))
    return Problem(
        dimension=1,
        objective=lambda x: float(f(np.asarray(x, float))),
        region=region,
        oracle=grad,
        stochastic_oracle=deterministic_as_stochastic(grad),
        certificate=cert,
        **kw,
    )


@pytest.fixture(scope="session")
def svm_certified():
    svm = zoo.make_svm(zoo.synthetic_svm())
    cert = zoo.certify_optimum(svm, "long-run", 20_000)
    return svm.with_certificate(cert)
