"""Eigenpairs of the weighted problem L u = lambda a(x) u and hypothesis checks.

The principal pair is found by power iteration on the smoothing map
v -> L^{-1}(a * v), whose dominant eigenvalue is 1/lambda_1. The map is
entrywise positive in the admissible regime, so the iteration started from
the positive vector sin(pi x) converges to the positive principal pair.
Higher modes come from the same iteration deflated in the a-weighted inner
product; for variable p that deflation is approximate and the modes are
diagnostics only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import operators
from .errors import (
    DegenerateDeflation,
    ModelAssumptionWarning,
    NoConvergence,
    NonPositiveEigenfunction,
    ZeroDenominator,
)

_PI2 = np.pi**2
_PI4 = np.pi**4


@dataclass(frozen=True)
class EigenPair:
    """One eigenpair: 1-based index, eigenvalue, sup-normalized eigenfunction,
    strict sign-change count, and the sup-norm residual ||L phi - lambda a phi||."""

    index: int
    lam: float
    phi: np.ndarray
    nodal_count: int
    residual: float


def nodal_count(phi: np.ndarray) -> int:
    """Strict sign changes across consecutive nodes, ignoring numerically
    zero entries (grid points can land exactly on a zero of the mode)."""
    w = phi[np.abs(phi) > 1e-12 * np.max(np.abs(phi))]
    return int(np.sum(w[:-1] * w[1:] < 0.0))


def _normalized(v: np.ndarray) -> np.ndarray:
    v = v / v[np.argmax(np.abs(v))]
    v.flags.writeable = False
    return v


def _weight_vector(fact, a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (fact.n,):
        raise ValueError(f"weight must have length {fact.n}, got {a.shape}")
    if np.min(a) < 0.0 or np.max(a) <= 0.0:
        raise ValueError("weight a must be nonnegative with max a > 0")
    return a


def _power_iteration(fact, a, v0, deflate, tol, max_iter):
    """Deflated power iteration on v -> L^{-1}(a v); returns (1/nu, v, iters)."""
    h = fact.h

    def weighted(u, w):
        return h * float(np.sum(a * u * w))

    def project_out(w):
        for d in deflate:
            denom = weighted(d, d)
            if denom <= 0.0:
                raise DegenerateDeflation("a-weighted norm of a deflation vector vanished")
            w = w - (weighted(w, d) / denom) * d
        return w

    v = project_out(v0.astype(float))
    sup = np.max(np.abs(v))
    if sup == 0.0:
        raise DegenerateDeflation("start vector deflated to zero")
    v = v / sup
    nu_old = np.inf
    for it in range(1, max_iter + 1):
        w = project_out(operators.solve(fact, a * v))
        sup = np.max(np.abs(w))
        if not np.isfinite(sup) or sup == 0.0:
            raise DegenerateDeflation("iterate collapsed under deflation")
        nu = float(w @ v) / float(v @ v)
        v = w / sup
        if nu != 0.0 and abs(nu - nu_old) <= tol * abs(nu) and it >= 2:
            return 1.0 / nu, v, it
        nu_old = nu
    raise NoConvergence(f"power iteration did not stabilize in {max_iter} iterations")


def principal_eigenpair(fact, a, tol: float = 1e-13, max_iter: int = 500) -> EigenPair:
    """Smallest eigenvalue and positive eigenfunction of L u = lambda a u.

    Stops when successive Rayleigh estimates agree to `tol` relative.
    Raises NonPositiveEigenfunction if the converged mode is not strictly
    positive, which flags an inadmissible p (or a) rather than a solver bug.
    """
    a = _weight_vector(fact, a)
    if np.min(fact.p) + _PI2 <= 0.0:
        warnings.warn(
            "p(x) reaches -pi^2: the operator may lose positivity and the "
            "principal mode its sign",
            ModelAssumptionWarning,
            stacklevel=2,
        )
    x = np.arange(1, fact.n + 1) * fact.h
    lam, v, _ = _power_iteration(fact, a, np.sin(np.pi * x), (), tol, max_iter)
    phi = _normalized(v)
    if np.min(phi) <= 0.0:
        raise NonPositiveEigenfunction(
            f"principal mode has min {np.min(phi):.3e}; hypotheses on p, a likely fail"
        )
    residual = float(np.max(np.abs(operators.apply_operator(fact, phi) - lam * a * phi)))
    return EigenPair(index=1, lam=lam, phi=phi, nodal_count=nodal_count(phi), residual=residual)


def higher_eigenpairs(fact, a, count: int, principal: EigenPair,
                      tol: float = 1e-13, max_iter: int = 500) -> list[EigenPair]:
    """Eigenpairs 2 .. count+1 via deflation against previously found modes.

    Deflation uses the a-weighted inner product, which is exact for constant p
    (self-adjoint case) and approximate otherwise.
    """
    if count < 0 or count > 5:
        raise ValueError(f"count must be in 0..5, got {count}")
    if count == 0:
        return []
    x = np.arange(1, fact.n + 1) * fact.h
    found = [principal]
    for k in range(2, count + 2):
        lam, v, _ = _power_iteration(
            fact, a, np.sin(k * np.pi * x), tuple(p.phi for p in found), tol, max_iter
        )
        phi = _normalized(v)
        residual = float(np.max(np.abs(operators.apply_operator(fact, phi) - lam * a * phi)))
        found.append(EigenPair(index=k, lam=lam, phi=phi,
                               nodal_count=nodal_count(phi), residual=residual))
    return found[1:]


def rayleigh_quotient(u, p, a) -> float:
    """Discrete Rayleigh quotient <L u, u>_h / <a u, u>_h.

    The numerator is assembled as h * (||A u||^2 + sum p (A u) u), the exact
    summation-by-parts form of int (u'')^2 - int p u'' u for grid functions
    vanishing at both ends.
    """
    u = np.asarray(u, dtype=float)
    p = np.asarray(p, dtype=float) * np.ones_like(u)
    a = np.asarray(a, dtype=float) * np.ones_like(u)
    n = u.size
    h = 1.0 / (n + 1)
    Au = 2.0 * u
    Au[:-1] -= u[1:]
    Au[1:] -= u[:-1]
    Au /= h**2
    denom = h * float(np.sum(a * u * u))
    if denom <= 0.0:
        raise ZeroDenominator("a-weighted norm of u vanishes")
    num = h * (float(Au @ Au) + float((p * u) @ Au))
    return num / denom


@dataclass(frozen=True)
class HypothesisReport:
    """Verdicts with numeric evidence for the admissibility conditions."""

    h1: dict
    h2: dict
    h3: dict
    k1: dict
    k2_sufficient: dict
    lambda1: float
    theorem_applies: bool

    def to_dict(self) -> dict:
        return {
            "h1": dict(self.h1),
            "h2": dict(self.h2),
            "h3": dict(self.h3),
            "k1": dict(self.k1),
            "k2_sufficient": dict(self.k2_sufficient),
            "lambda1": self.lambda1,
            "theorem_applies": self.theorem_applies,
        }


def hypothesis_flags(spec, window: int | None = None, strip_delta: float = 0.05) -> dict:
    """The cheap part of check_hypotheses: all verdicts except lambda1.

    H2's "not identically zero on any subinterval" is certified at window
    resolution: every run of `window` consecutive nodes must contain a
    positive sample. The kernel nondegeneracy condition is replaced by the
    checkable sufficient condition f >= delta on the strip |x - y| <= delta.
    """
    grid = spec.grid
    n = grid.n
    p = spec.p.samples
    a = spec.a.samples
    F = spec.f.samples
    if window is None:
        window = max(3, n // 20)
    window = int(min(max(window, 1), n))

    min_p_plus = float(np.min(p) + _PI2)
    h1 = {"holds": bool(min_p_plus > 0.0), "min_p_plus_pi2": min_p_plus}

    windows = np.lib.stride_tricks.sliding_window_view(a, window)
    min_window_max = float(np.min(np.max(windows, axis=1)))
    h2 = {
        "holds": bool(np.min(a) >= 0.0 and min_window_max > 1e-12),
        "max_a": float(np.max(a)),
        "min_window_max": min_window_max,
    }

    s2 = np.sin(np.pi * grid.nodes) ** 2
    lhs = _PI4 + 2.0 * _PI2 * grid.h * float(np.sum(p * s2))
    rhs = 2.0 * grid.h * float(np.sum(a * s2))
    h3 = {"holds": bool(lhs < rhs), "lhs": lhs, "rhs": rhs}

    min_f = float(np.min(F))
    k1 = {"holds": bool(min_f >= 0.0), "min_f": min_f}

    x = grid.nodes
    strip = np.abs(x[:, None] - x[None, :]) <= strip_delta
    strip_min = float(np.min(F[strip]))
    k2 = {"holds": bool(strip_min >= strip_delta), "strip_min": strip_min}

    return {"h1": h1, "h2": h2, "h3": h3, "k1": k1, "k2_sufficient": k2}


def check_hypotheses(spec, window: int | None = None, strip_delta: float = 0.05) -> HypothesisReport:
    """Evaluate all admissibility conditions and the principal eigenvalue.

    Always returns a report; lambda1 is NaN when the eigensolve itself fails
    (for example because the operator factorization breaks down).
    """
    flags = hypothesis_flags(spec, window=window, strip_delta=strip_delta)
    try:
        fact = operators.assemble_operator(spec)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ModelAssumptionWarning)
            lam1 = principal_eigenpair(fact, spec.a.samples).lam
    except Exception:
        lam1 = float("nan")
    applies = (
        flags["h1"]["holds"]
        and flags["h2"]["holds"]
        and flags["h3"]["holds"]
        and flags["k1"]["holds"]
    )
    return HypothesisReport(
        h1=flags["h1"],
        h2=flags["h2"],
        h3=flags["h3"],
        k1=flags["k1"],
        k2_sufficient=flags["k2_sufficient"],
        lambda1=float(lam1),
        theorem_applies=bool(applies),
    )
