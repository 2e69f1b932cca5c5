# # Quadratic growth without strong convexity
#
# f(x) = dist(x, B)^2 is flat on the ball B, so it is not strongly convex,
# yet it grows quadratically away from the solution set.

import numpy as np

from subgradkit import bounds, schedules, solvers, zoo
from subgradkit.verification import check_stochastic_rate, certify_second_moment

prob = zoo.make_quadratic_growth(d=3, r=1.0)

# %%
# Two minimizers with a zero subgradient between them rule out any mu > 0.

x, y = np.array([0.5, 0, 0]), np.array([-0.5, 0, 0])
print("f(x) = f(y) =", prob.objective(x), prob.objective(y), " g(x) =", prob.oracle(x))

# %%
# ||grad f||^2 = 4 (f - f*) exactly, so (L0, L1) = (0, 4).

print(certify_second_moment(prob))

# %%
# The quadratic-growth schedule keeps L1 * alpha_k < 1.

sch = schedules.quadratic_growth(2.0, 4.0)
print("max L1 * alpha:", (4.0 * sch.alphas(10_000)).max())
print("recurrence holds:", schedules.verify_recurrence(sch, 10_000))

# %%
# Expectation bound with the (k+1)(1 - L1 alpha_k) average.

mean, se, bound, ok = check_stochastic_rate(prob, sch, None, "QG", 2000, num_seeds=20)
print(f"mean {mean:.3e}, bound {bound:.3e}, ok={ok}")
