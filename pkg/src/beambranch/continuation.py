"""Branch tracing for the parameterized problem L u = lambda (a u - u^rho theta_u).

The trivial line u = 0 solves the equation for every lambda; a branch of
positive solutions leaves it at (lambda_1, 0). This module starts on that
branch with an amplitude-pinned Newton solve, follows it by pseudo-arclength
predictor/corrector steps, and certifies a solution whenever the branch
crosses lambda = 1.

Residual conventions
--------------------
`residual` returns the raw discrete form

    F(lambda, u) = L_h u - lambda a u + lambda u^rho theta(u),

whose sup-norm has a double-precision evaluation floor of roughly
||L_h|| * eps * ||u|| (about 1e-5 at n = 199): entries of L_h scale like
h^-4, so no computed vector can push that form below the floor. Convergence
control and the reported certificates therefore use the equivalent inverted
form

    r(lambda, u) = u - lambda L_h^{-1}(a u - u^rho theta(u)),

which is O(1)-conditioned and reaches ~1e-13. A point with ||r|| <= tol is
a solution of the discrete problem to working precision.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import nonlocal_term, operators, spectra
from .errors import (
    ModelAssumptionWarning,
    NewtonDiverged,
    NoBracket,
    PositivityLost,
)

STATUS_CROSSED = "crossed_lambda_1"
STATUS_LAMBDA_MAX = "reached_lambda_max"
STATUS_MAX_STEPS = "reached_max_steps"
STATUS_POSITIVITY = "failed_positivity"
STATUS_NEWTON = "newton_failure"

_DS_MIN = 1e-6
_DS_GROWTH = 1.3


@dataclass(frozen=True)
class BranchPoint:
    """One accepted point (lambda, u) with its diagnostics."""

    lam: float
    u: np.ndarray
    sup_norm: float
    min_value: float
    residual_norm: float
    arclength: float


@dataclass
class Branch:
    """The computed piece of the solution continuum."""

    points: list
    start_lambda: float
    status: str

    def crossing_point(self):
        """The recorded lambda = 1 point, or None."""
        for pt in self.points:
            if pt.lam == 1.0:
                return pt
        return None


@dataclass(frozen=True)
class PlaneConstraint:
    """Linear constraint coef_u . u + coef_lam * lambda = offset."""

    coef_u: np.ndarray
    coef_lam: float
    offset: float


def _interaction(ev, u):
    return nonlocal_term.signed_power(u, ev.rho) * nonlocal_term.theta(ev, u)


def residual(spec, fact, ev, lam: float, u: np.ndarray) -> np.ndarray:
    """Raw discrete residual F(lambda, u); see the module docstring for its
    evaluation floor in double precision."""
    u = np.asarray(u, dtype=float)
    a = spec.a.samples
    return operators.apply_operator(fact, u) - lam * a * u + lam * _interaction(ev, u)


def fixed_point_residual(spec, fact, ev, lam: float, u: np.ndarray) -> np.ndarray:
    """Inverted-form residual r = u - lambda L^{-1}(a u - u^rho theta(u))."""
    u = np.asarray(u, dtype=float)
    a = spec.a.samples
    return u - lam * operators.solve(fact, a * u - _interaction(ev, u))


def _jacobian_blocks(spec, fact, ev, lam, u):
    """dr/du and dr/dlambda of the inverted form."""
    a = spec.a.samples
    M = np.diag(a) - nonlocal_term.theta_jacobian(ev, u)
    J = np.eye(fact.n) - lam * operators.solve(fact, M)
    dlam = -operators.solve(fact, a * u - _interaction(ev, u))
    return J, dlam


def newton_correct(spec, fact, ev, lam: float, u0: np.ndarray,
                   constraint: PlaneConstraint | None = None,
                   tol: float = 1e-10, max_iter: int = 25) -> tuple[float, np.ndarray]:
    """Newton iteration on [r(lambda, u); constraint].

    With constraint None, lambda is held fixed. Otherwise the system is
    bordered with the constraint row and the dr/dlambda column, and lambda
    is corrected along with u. Iterates must stay strictly positive when
    sigma < 1 (the interaction derivative is singular at zero).
    """
    u = np.asarray(u0, dtype=float).copy()
    lam = float(lam)
    for _ in range(max_iter):
        if ev.sigma < 1.0 and np.min(u) <= 0.0 and np.max(np.abs(u)) > 0.0:
            raise PositivityLost("iterate left the positive cone with sigma < 1")
        r = fixed_point_residual(spec, fact, ev, lam, u)
        c = 0.0 if constraint is None else (
            float(constraint.coef_u @ u) + constraint.coef_lam * lam - constraint.offset
        )
        if max(np.max(np.abs(r)), abs(c)) <= tol:
            return lam, u
        J, dlam = _jacobian_blocks(spec, fact, ev, lam, u)
        try:
            if constraint is None:
                step = np.linalg.solve(J, -r)
                du, dl = step, 0.0
            else:
                n = fact.n
                B = np.zeros((n + 1, n + 1))
                B[:n, :n] = J
                B[:n, n] = dlam
                B[n, :n] = constraint.coef_u
                B[n, n] = constraint.coef_lam
                step = np.linalg.solve(B, np.concatenate([-r, [-c]]))
                du, dl = step[:n], step[n]
        except np.linalg.LinAlgError as exc:
            raise NewtonDiverged(f"linear solve failed in corrector: {exc}") from exc
        if not np.all(np.isfinite(du)) or not np.isfinite(dl):
            raise NewtonDiverged("non-finite Newton step (degenerate constraint?)")
        if np.max(np.abs(du)) > 1e8:
            raise NewtonDiverged("Newton step blew up")
        u = u + du
        lam = lam + dl
    raise NewtonDiverged(f"no convergence in {max_iter} iterations")


def _make_point(spec, fact, ev, lam, u, arclength) -> BranchPoint:
    u = u.copy()
    u.flags.writeable = False
    rnorm = float(np.max(np.abs(fixed_point_residual(spec, fact, ev, lam, u))))
    return BranchPoint(
        lam=float(lam),
        u=u,
        sup_norm=float(np.max(np.abs(u))),
        min_value=float(np.min(u)),
        residual_norm=rnorm,
        arclength=float(arclength),
    )


def branch_start(spec, fact, ev, eigenpair: spectra.EigenPair,
                 epsilon: float = 1e-2, tol: float = 1e-10,
                 max_iter: int = 50) -> BranchPoint:
    """First nontrivial point near the bifurcation point (lambda_1, 0).

    Solves the bordered system with the amplitude pin
    <phi_1, u>_h = epsilon <phi_1, phi_1>_h and lambda free, starting from
    (lambda_1, epsilon phi_1).
    """
    if epsilon <= 0.0:
        raise NewtonDiverged(f"amplitude pin is degenerate for epsilon = {epsilon}")
    if eigenpair.index != 1:
        raise ValueError("branch start requires the principal eigenpair")
    phi = eigenpair.phi
    h = fact.h
    pin = PlaneConstraint(
        coef_u=h * phi, coef_lam=0.0, offset=epsilon * h * float(phi @ phi)
    )
    lam, u = newton_correct(spec, fact, ev, eigenpair.lam, epsilon * phi,
                            constraint=pin, tol=tol, max_iter=max_iter)
    if np.min(u) <= 0.0:
        raise PositivityLost(f"start point not positive (min u = {np.min(u):.3e})")
    if abs(lam - eigenpair.lam) > 0.1 * abs(eigenpair.lam):
        raise NewtonDiverged(
            f"start point drifted from the bifurcation point: lambda = {lam:.6g} "
            f"vs lambda_1 = {eigenpair.lam:.6g}"
        )
    if np.max(np.abs(u)) > 10.0 * epsilon:
        raise NewtonDiverged("start amplitude is not in the local regime")
    return _make_point(spec, fact, ev, lam, u, 0.0)


def _weighted_norm(du: np.ndarray, dlam: float) -> float:
    return float(np.sqrt(dlam * dlam + np.mean(du * du)))


def trace_branch(spec, fact, ev, eigenpair: spectra.EigenPair, *,
                 ds: float = 0.02, max_steps: int = 500, lambda_max: float = 2.0,
                 newton_tol: float = 1e-10, epsilon: float = 1e-2,
                 hypotheses: dict | None = None) -> Branch:
    """Trace the positive branch from (lambda_1, 0) by pseudo-arclength steps.

    Predictor: secant tangent between the last two accepted points, normalized
    in the weighted metric sqrt(dlam^2 + mean(du^2)). Corrector: bordered
    Newton on the arclength plane. The step halves on corrector failure (down
    to 1e-6) and grows by 1.3 after two easy steps (up to 10x the initial ds).

    When two consecutive accepted points bracket lambda = 1, a fixed-lambda
    solve from the linear interpolant is inserted between them and the branch
    is marked crossed; tracing continues to lambda_max or max_steps so the
    full diagram up to lambda_max is available. Failures are recorded in the
    status, never raised.
    """
    flags = hypotheses if hypotheses is not None else spectra.hypothesis_flags(spec)
    if not all(flags[k]["holds"] for k in ("h1", "h2", "h3", "k1")):
        failed = [k for k in ("h1", "h2", "h3", "k1") if not flags[k]["holds"]]
        warnings.warn(
            f"existence hypotheses not all satisfied ({', '.join(failed)}); "
            "tracing anyway, a lambda = 1 crossing is not guaranteed",
            ModelAssumptionWarning,
            stacklevel=2,
        )

    try:
        start = branch_start(spec, fact, ev, eigenpair, epsilon=epsilon, tol=newton_tol)
    except (NewtonDiverged, PositivityLost) as exc:
        status = STATUS_POSITIVITY if isinstance(exc, PositivityLost) else STATUS_NEWTON
        return Branch(points=[], start_lambda=eigenpair.lam, status=status)

    points = [start]
    crossed = False
    prev_lam, prev_u = eigenpair.lam, np.zeros(fact.n)
    cur_lam, cur_u = start.lam, np.asarray(start.u)
    arclength = 0.0
    ds0 = ds
    easy_streak = 0
    status = STATUS_MAX_STEPS

    def record_crossing(lam_a, u_a, lam_b, u_b, s_before):
        """Fixed-lambda solve at lambda = 1 from the interpolant between the
        bracketing points; returns the crossing point or None."""
        t = (1.0 - lam_a) / (lam_b - lam_a)
        u_guess = u_a + t * (u_b - u_a)
        try:
            _, u_c = newton_correct(spec, fact, ev, 1.0, u_guess,
                                    tol=newton_tol, max_iter=50)
        except (NewtonDiverged, PositivityLost):
            return None
        if np.min(u_c) <= 0.0:
            return None
        s_c = s_before + _weighted_norm(u_c - u_a, 1.0 - lam_a)
        return _make_point(spec, fact, ev, 1.0, u_c, s_c)

    steps = 0
    failure = None
    while steps < max_steps:
        if cur_lam >= lambda_max:
            status = STATUS_LAMBDA_MAX
            break
        t_lam = cur_lam - prev_lam
        t_u = cur_u - prev_u
        norm = _weighted_norm(t_u, t_lam)
        if norm == 0.0:
            failure = STATUS_NEWTON
            break
        t_lam /= norm
        t_u /= norm

        halved = False
        accepted = None
        while True:
            lam_pred = cur_lam + ds * t_lam
            u_pred = cur_u + ds * t_u
            plane = PlaneConstraint(
                coef_u=t_u / fact.n,
                coef_lam=t_lam,
                offset=float(t_u @ u_pred) / fact.n + t_lam * lam_pred,
            )
            try:
                lam_new, u_new = newton_correct(spec, fact, ev, lam_pred, u_pred,
                                                constraint=plane, tol=newton_tol)
                if np.min(u_new) <= 0.0:
                    raise PositivityLost("accepted point would not be positive")
                accepted = (lam_new, u_new)
                break
            except (NewtonDiverged, PositivityLost) as exc:
                ds *= 0.5
                halved = True
                if ds < _DS_MIN:
                    failure = (STATUS_POSITIVITY if isinstance(exc, PositivityLost)
                               else STATUS_NEWTON)
                    break
        if accepted is None:
            break
        lam_new, u_new = accepted

        easy_streak = 0 if halved else easy_streak + 1
        if easy_streak >= 2:
            ds = min(ds * _DS_GROWTH, 10.0 * ds0)

        if not crossed and (cur_lam - 1.0) * (lam_new - 1.0) <= 0.0 and lam_new != cur_lam:
            crossing = record_crossing(cur_lam, cur_u, lam_new, u_new, arclength)
            if crossing is not None:
                points.append(crossing)
                crossed = True
                arclength = crossing.arclength
                step_len = _weighted_norm(u_new - np.asarray(crossing.u),
                                          lam_new - crossing.lam)
            else:
                step_len = _weighted_norm(u_new - cur_u, lam_new - cur_lam)
        else:
            step_len = _weighted_norm(u_new - cur_u, lam_new - cur_lam)

        arclength += step_len
        points.append(_make_point(spec, fact, ev, lam_new, u_new, arclength))
        prev_lam, prev_u = cur_lam, cur_u
        cur_lam, cur_u = lam_new, u_new
        steps += 1

    if failure is not None:
        status = failure
    if crossed:
        status = STATUS_CROSSED
    return Branch(points=points, start_lambda=eigenpair.lam, status=status)


def solve_at_lambda(spec, fact, ev, lambda_target: float, *,
                    branch: Branch | None = None, u0: np.ndarray | None = None,
                    tol: float = 1e-10, max_iter: int = 50,
                    epsilon: float = 1e-2) -> BranchPoint:
    """Positive solution at a fixed parameter value.

    The initial guess comes from an explicit u0 or from linear interpolation
    on a traced branch segment bracketing lambda_target. Converged solutions
    with amplitude below 10*epsilon are rejected as trivial-adjacent: that
    close to the bifurcation point the nontrivial root cannot be told apart
    from the trivial line at the solver's resolution.
    """
    if u0 is None:
        if branch is None or len(branch.points) < 2:
            raise NoBracket("need a traced branch or an explicit initial guess")
        guess = None
        for left, right in zip(branch.points[:-1], branch.points[1:]):
            if (left.lam - lambda_target) * (right.lam - lambda_target) <= 0.0:
                span = right.lam - left.lam
                t = 0.0 if span == 0.0 else (lambda_target - left.lam) / span
                guess = np.asarray(left.u) + t * (np.asarray(right.u) - np.asarray(left.u))
                break
        if guess is None:
            raise NoBracket(
                f"no branch segment brackets lambda = {lambda_target:.6g} "
                f"(branch spans [{branch.points[0].lam:.6g}, {branch.points[-1].lam:.6g}])"
            )
        u0 = guess
    lam, u = newton_correct(spec, fact, ev, lambda_target, u0, tol=tol, max_iter=max_iter)
    if np.max(np.abs(u)) < 10.0 * epsilon:
        raise NoBracket(
            f"converged amplitude {np.max(np.abs(u)):.3e} is below the trivial-adjacent "
            f"floor {10.0 * epsilon:.1e}"
        )
    if np.min(u) <= 0.0:
        raise PositivityLost(f"solution at lambda = {lambda_target} is not positive")
    return _make_point(spec, fact, ev, lam, u, 0.0)
