"""Produce the positive solution of a variable-coefficient nonlocal problem.

Setting lambda = 1 in the parameterized equation recovers the original
boundary value problem, so the solution found where the branch crosses
lambda = 1 is the object of interest:

    u'''' - (1 + 0.5 cos(2 pi x)) u''
        = (110 + 10 cos(2 pi x)) u - u(x) int_0^1 e^{-2|x-y|} u^2(y) dy,
    u(0) = u(1) = u''(0) = u''(1) = 0,  u > 0 on (0,1).

No closed form exists here; the certificate is the residual of the
computed profile, re-evaluated from scratch at the end.
"""

import numpy as np

from beambranch import (
    NonlocalEvaluator,
    assemble_operator,
    build_problem,
    check_hypotheses,
    fixed_point_residual,
    principal_eigenpair,
    solve_at_lambda,
    trace_branch,
)

spec = build_problem({
    "n": "199", "rho": "1", "sigma": "2",
    "p": "cosine:1,0.5,2", "a": "cosine:110,10,2", "f": "expdecay:1,2",
})
fact = assemble_operator(spec)
ev = NonlocalEvaluator.from_spec(spec)

report = check_hypotheses(spec)
print(f"hypotheses hold: {report.theorem_applies} (lambda_1 = {report.lambda1:.6f} < 1)")

pair = principal_eigenpair(fact, spec.a.samples)
branch = trace_branch(spec, fact, ev, pair, lambda_max=1.5)
print(f"branch: {len(branch.points)} points, status = {branch.status}")

solution = solve_at_lambda(spec, fact, ev, 1.0, branch=branch)
u = np.asarray(solution.u)
x = spec.grid.nodes

print(f"\nsolution at lambda = 1:")
print(f"  sup norm  : {solution.sup_norm:.8f}")
print(f"  min value : {solution.min_value:.6e}  (positive everywhere)")
print(f"  residual  : {solution.residual_norm:.2e}")

print("\nprofile sampled at a few stations:")
for xq in (0.1, 0.25, 0.5, 0.75, 0.9):
    j = np.argmin(np.abs(x - xq))
    print(f"  u({x[j]:.3f}) = {u[j]:.6f}")

fresh = np.max(np.abs(fixed_point_residual(spec, fact, ev, 1.0, u)))
print(f"\nindependent re-evaluation of the residual: {fresh:.2e}")
print("the profile inherits the symmetry of the coefficients about x = 1/2,")
print("and its amplitude is modest because lambda_1 sits just below 1: the")
print("crossing happens close to the bifurcation point.")
