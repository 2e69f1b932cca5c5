# # Stochastic subgradient method on a regularized SVM
#
# The hinge loss plus (lam/2)||x||^2 has no uniform bound on E||g||^2, but it
# does satisfy E||g||^2 <= L0^2 + L1 (f(x) - f*) with (6L^2, 6 lam).

import numpy as np

from subgradkit import schedules, solvers, zoo
from subgradkit.verification import check_stochastic_rate

# %%
# Certify f* first: a long deterministic run plus a dual refinement gives a
# lower bound, so the residual is a proven gap.

svm = zoo.make_svm(zoo.synthetic_svm())
cert = zoo.certify_optimum(svm, "long-run", 20_000)
svm = svm.with_certificate(cert)
print(f"f* = {cert.f_star:.16f}  residual {cert.residual:.1e}  low confidence: {cert.low_confidence}")

# %%
# One run with the SVM schedule, averaged with weights (k+1).

lam = svm.meta["lam"]
sch = schedules.quad_regularized_svm(lam)
trace = solvers.run_stochastic(svm, sch, 10_000, seed=0)
xbar = solvers.weighted_average(trace, "(k+1)-weighted", sch)
print("gap of averaged point:", svm.gap(xbar))
print("gap of last iterate:  ", svm.gap(trace.iterates[-1]))

# %%
# The expectation bound is checked with an ensemble: mean + 3 SE against it.

mean, se, bound, ok = check_stochastic_rate(svm, sch, None, "C5", 10_000, num_seeds=40)
print(f"mean {mean:.3e} +- {se:.1e}, bound {bound:.3e}, ok={ok}")

# %%
# Ensemble means at a few horizons; the bound is loose but the decay is close to 1/T.

for T in (1000, 10_000):
    m, s = solvers.ensemble_expectation(svm, sch, T, "(k+1)-weighted", 20)
    print(f"T={T:>6}  mean gap {m:.3e}  T * gap {T * m:.2f}")
