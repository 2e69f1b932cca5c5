# # Normalized subgradient method on non-Lipschitz objectives
#
# The normalized step x <- P(x - alpha g/||g||) needs no Lipschitz constant.
# Its rate is governed by how fast f grows away from the minimizer.

import numpy as np

from subgradkit import bounds, schedules, solvers, zoo
from subgradkit.verification import check_deterministic_rate, check_shor

# %%
# Quadratic growth (Hölder exponent v = 1) gives O(1/T), v = 0.5 gives O(1/T^0.75).

for v, theorem in ((1.0, "C2"), (0.5, "C3")):
    prob = zoo.make_holder_power(d=1, L=1.0, v=v)
    print(f"v = {v}")
    for T in (100, 1000, 10_000):
        trace = solvers.run_deterministic(prob, schedules.constant_step(1.0, T), T)
        rec = check_deterministic_rate(trace, prob, theorem)
        print(f"  T={T:>6}  min gap {rec.lhs:.3e}  bound {rec.rhs:.3e}  ok={rec.passed}")

# %%
# With v = 1 and sqrt(T+1) an integer, the radial steps land exactly on the
# minimizer and the run stops early.

prob = zoo.make_holder_power(d=2, L=1.0, v=1.0)
trace = solvers.run_deterministic(prob, schedules.constant_step(1.0, 99), 99)
print("stopped at k =", trace.terminated_at_minimizer, " gap", trace.min_gap())

# %%
# Shor's hyperplane bound holds for any positive steps, here alpha_k = 0.3/(k+1).

prob = zoo.make_additive_composite(d=2, L_phi=1.0, v=1.0, L_h=2.0)
R = np.linalg.norm(prob.initial_point())
sch = schedules.harmonic(5000, 0.3)
trace = solvers.run_deterministic(prob, sch, 5000)
rec = check_shor(trace, R, sch.alphas(5000))
print(f"min hyperplane distance {rec.lhs:.4g} <= {rec.rhs:.4g}: {rec.passed}")
print("growth envelope at that distance:", bounds.growth_eval(prob.growth_model, rec.rhs))
