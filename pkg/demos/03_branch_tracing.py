"""Trace the branch of positive solutions from the bifurcation point.

For p = 0, a = 100, unit kernel, rho = 1, sigma = 2, the discrete branch is
known in closed form: the profile is A sin(pi x) with
lambda A^2 = 2 (100 lambda - mu_1^2). The pseudo-arclength trace should
reproduce that law at every accepted point, move right (lambda increasing),
and cross lambda = 1 with amplitude sqrt(2 (100 - mu_1^2)).
"""

import numpy as np

from beambranch import (
    NonlocalEvaluator,
    assemble_operator,
    build_problem,
    principal_eigenpair,
    second_difference_eigenvalue,
    trace_branch,
)

n = 199
spec = build_problem({
    "n": str(n), "rho": "1", "sigma": "2",
    "p": "constant:0", "a": "constant:100", "f": "constant:1",
})
fact = assemble_operator(spec)
ev = NonlocalEvaluator.from_spec(spec)
pair = principal_eigenpair(fact, spec.a.samples)
mu1sq = second_difference_eigenvalue(n, 1) ** 2

print(f"bifurcation point: lambda_1 = {pair.lam:.9f} (= mu_1^2 / 100)")
branch = trace_branch(spec, fact, ev, pair, lambda_max=2.0)
print(f"traced {len(branch.points)} points, status = {branch.status}\n")

print(f"{'step':>4} {'lambda':>12} {'sup_norm':>12} {'residual':>10} {'law defect':>11}")
for step, pt in enumerate(branch.points):
    if step % 5 == 0 or pt.lam == 1.0:
        law = abs(pt.lam * pt.sup_norm**2 - 2.0 * (100.0 * pt.lam - mu1sq))
        tag = "  <- lambda = 1 crossing" if pt.lam == 1.0 else ""
        print(f"{step:4d} {pt.lam:12.8f} {pt.sup_norm:12.8f} "
              f"{pt.residual_norm:10.2e} {law:11.2e}{tag}")

cp = branch.crossing_point()
exact_amp = np.sqrt(2.0 * (100.0 - mu1sq))
print(f"\ncrossing amplitude : {cp.sup_norm:.10f}")
print(f"closed-form value  : {exact_amp:.10f}")
print(f"difference         : {abs(cp.sup_norm - exact_amp):.2e}")
print(f"certificate        : ||r||_inf = {cp.residual_norm:.2e}, min u = {cp.min_value:.3e}")
