# # Feasible regions, projections and oracles
#
# A problem is an objective, a subgradient oracle and a closed convex region
# with a closed-form projection. This walk-through builds a few by hand.

import numpy as np

from subgradkit import FeasibleRegion, StochasticOracle, exact_expectation, project
from subgradkit import zoo

# %%
# Projection onto each region kind.

x = np.array([3.0, 4.0])
print("whole space:", project(FeasibleRegion.whole_space(2), x))
print("unit ball:  ", project(FeasibleRegion.ball([0, 0], 1.0), x))
print("box [0,1]^2:", project(FeasibleRegion.box([0, 0], [1, 1]), x))
print("x1+x2 <= 1: ", project(FeasibleRegion.halfspace([1, 1], 1.0), x))

# %%
# Projections are nonexpansive, which is what makes the per-step analysis work.

rng = np.random.default_rng(0)
ball = FeasibleRegion.ball([0.5, -0.5], 2.0)
ratios = []
for _ in range(1000):
    a, b = rng.normal(scale=5, size=(2, 2))
    ratios.append(np.linalg.norm(project(ball, a) - project(ball, b)) / np.linalg.norm(a - b))
print("largest ||P(a)-P(b)|| / ||a-b||:", max(ratios))

# %%
# A finite-sum oracle draws one term uniformly. Its exact expectation is
# computed by enumeration, not sampling.

axes = StochasticOracle(lambda x, i: np.eye(2)[i], num_samples=2)
print("E g       =", exact_expectation(axes, np.zeros(2)))
print("E ||g||^2 =", exact_expectation(axes, np.zeros(2), lambda g: g @ g))

# %%
# The SVM instance exposes one hinge term per sample, plus the regularizer.

svm = zoo.make_svm(zoo.synthetic_svm())
w = np.zeros(5)
G = svm.stochastic_oracle.estimates(w)
print("n estimates:", G.shape, " mean equals full subgradient:",
      np.allclose(G.mean(axis=0), svm.oracle(w)))
print("declared (L0, L1):", svm.second_moment)
